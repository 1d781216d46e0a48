"""Ablated and counterfactual variants of country records.

Ablations suppress information blocks at render time (the underlying values
are retained for bookkeeping); counterfactuals rewrite values or names.
Every rule touches exactly its declared field set.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .countries import CountryRecord, Dataset, MissingFieldError
from .prompts import ABLATION_FIELDS, PromptCondition

# Willingness flip: low-willingness baselines (<= 50% willing) get a high
# block, high baselines get a low block.
FLIP_LOW_BASELINE = (75.0, 15.0)
FLIP_HIGH_BASELINE = (15.0, 10.0)
WILLINGNESS_FLIP_THRESHOLD = 50.0

GDP_FLIP_THRESHOLD = 20_000.0
GDP_FLIP_LOW_TO = 65_000.0
GDP_FLIP_HIGH_TO = 2_000.0

# Name-mismatch pools.
POOR_POOL_GDP_MAX = 5_000.0
RICH_POOL_GDP_MIN = 40_000.0


class PerturbationError(Exception):
    pass


class UnknownAblationError(PerturbationError):
    pass


class EmptyPoolError(PerturbationError):
    pass


@dataclass(frozen=True)
class PerturbedRecord:
    base: CountryRecord
    condition: PromptCondition
    effective: CountryRecord
    provenance_note: str
    suppressed: frozenset = frozenset()


def ablate(
    record: CountryRecord, ablation_id: str, format: str = "natural"
) -> PerturbedRecord:
    """Mark one information block's fields as suppressed-for-prompting."""
    if ablation_id not in ABLATION_FIELDS:
        raise UnknownAblationError(f"unknown ablation {ablation_id!r}")
    fields = ABLATION_FIELDS[ablation_id]
    return PerturbedRecord(
        base=record,
        condition=PromptCondition.ablation(ablation_id, format),
        effective=record,
        provenance_note=f"{ablation_id}: suppressed {', '.join(fields)}",
        suppressed=frozenset(fields),
    )


def flip_willingness(
    record: CountryRecord, format: str = "natural"
) -> PerturbedRecord:
    """Replace the willingness block with the opposite-regime values."""
    if record.willing_1pct is None:
        raise MissingFieldError(f"{record.country_name}: willing_1pct is missing")
    if record.willing_1pct <= WILLINGNESS_FLIP_THRESHOLD:
        willing, smaller = FLIP_LOW_BASELINE
    else:
        willing, smaller = FLIP_HIGH_BASELINE
    effective = record.with_values(willing_1pct=willing, willing_smaller_pct=smaller)
    return PerturbedRecord(
        base=record,
        condition=PromptCondition.counterfactual("cf_willingness_flip", format),
        effective=effective,
        provenance_note=(
            f"cf_willingness_flip: {record.willing_1pct} -> {willing} "
            f"(+{smaller} smaller amount)"
        ),
    )


def flip_gdp(record: CountryRecord, format: str = "natural") -> PerturbedRecord:
    """Replace GDP per capita with the opposite-regime value, all else fixed."""
    if record.gdp_pc_ppp_2021 is None:
        raise MissingFieldError(f"{record.country_name}: gdp_pc_ppp_2021 is missing")
    new_gdp = (
        GDP_FLIP_LOW_TO
        if record.gdp_pc_ppp_2021 <= GDP_FLIP_THRESHOLD
        else GDP_FLIP_HIGH_TO
    )
    effective = record.with_values(gdp_pc_ppp_2021=new_gdp)
    return PerturbedRecord(
        base=record,
        condition=PromptCondition.counterfactual("cf_gdp_flip", format),
        effective=effective,
        provenance_note=f"cf_gdp_flip: {record.gdp_pc_ppp_2021} -> {new_gdp}",
    )


def mismatch_pools(ds: Dataset) -> tuple[list[CountryRecord], list[CountryRecord]]:
    poor = [
        r
        for r in ds.records
        if r.gdp_pc_ppp_2021 is not None and r.gdp_pc_ppp_2021 < POOR_POOL_GDP_MAX
    ]
    rich = [
        r
        for r in ds.records
        if r.gdp_pc_ppp_2021 is not None and r.gdp_pc_ppp_2021 > RICH_POOL_GDP_MIN
    ]
    return poor, rich


def mismatch_names(
    ds: Dataset, seed: int, format: str = "natural"
) -> list[PerturbedRecord]:
    """Pair rich-pool covariates with poor-pool names and vice versa.

    Names are a seeded shuffle of the opposite pool assigned cyclically, so
    no country keeps its own name and a one-rich/one-poor dataset swaps
    pairwise. Mid-income countries are excluded from the condition. Order
    of the returned list follows dataset order over participants.
    """
    poor, rich = mismatch_pools(ds)
    if not poor or not rich:
        raise EmptyPoolError(
            f"name mismatch needs both pools: {len(poor)} poor (<"
            f"${POOR_POOL_GDP_MAX:,.0f}), {len(rich)} rich (>"
            f"${RICH_POOL_GDP_MIN:,.0f})"
        )
    rng = np.random.default_rng([seed, 4242])
    poor_names = [r.country_name for r in poor]
    rich_names = [r.country_name for r in rich]
    rng.shuffle(poor_names)
    rng.shuffle(rich_names)

    assignment = {}
    for i, rec in enumerate(rich):
        assignment[rec.country_name] = poor_names[i % len(poor_names)]
    for i, rec in enumerate(poor):
        assignment[rec.country_name] = rich_names[i % len(rich_names)]

    out = []
    for rec in ds.records:
        if rec.country_name not in assignment:
            continue
        cf_name = assignment[rec.country_name]
        effective = rec.with_values(country_name=cf_name)
        out.append(
            PerturbedRecord(
                base=rec,
                condition=PromptCondition.counterfactual("cf_name_mismatch", format),
                effective=effective,
                provenance_note=(
                    f"cf_name_mismatch(seed={seed}): {rec.country_name} -> "
                    f"{cf_name}"
                ),
            )
        )
    return out


def mismatch_manifest(perturbed: list[PerturbedRecord], seed: int) -> dict:
    """Audit entry describing a name-mismatch assignment."""
    return {
        "rule": "cf_name_mismatch",
        "seed": seed,
        "poor_pool_gdp_max": POOR_POOL_GDP_MAX,
        "rich_pool_gdp_min": RICH_POOL_GDP_MIN,
        "assignments": [
            {"country": p.base.country_name, "counterfactual_name": p.effective.country_name}
            for p in perturbed
        ],
    }
