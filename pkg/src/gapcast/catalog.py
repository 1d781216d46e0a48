"""Survey item catalog: question texts and population descriptions.

Holds the global 1%-income item plus the 24 U.S. policy items, decoupled
from prompt rendering. The catalog ships as a delimited data file so users
can add items without code changes; entries are immutable at runtime.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

GLOBAL_ITEM_ID = "GCCS-1PCT"


class CatalogError(Exception):
    pass


class UnknownItemError(CatalogError):
    pass


@dataclass(frozen=True)
class SurveyItem:
    item_id: str
    group: str  # "global" or "us_policy"
    topic_label: str
    population_desc: str  # may contain a {country} placeholder
    population_ref: str  # display name used in question text, {country} or fixed
    first_order_question: str
    first_order_options: str
    belief_target: str  # predicate completing "... respondents are <target>"
    first_order_report: str  # clause with a {willing} placeholder
    smaller_amount_clause: str  # optional clause with {smaller}; empty if N/A
    second_order_options: str
    scale_lo: float = 0.0
    scale_hi: float = 100.0
    reconstructed: bool = False
    editorial_note: str = ""

    def __post_init__(self):
        if not self.item_id:
            raise CatalogError("item_id must be non-empty")
        if not self.first_order_question or not self.belief_target:
            raise CatalogError(f"{self.item_id}: question texts must be non-empty")
        if (self.scale_lo, self.scale_hi) != (0.0, 100.0):
            raise CatalogError(f"{self.item_id}: scale must be [0, 100]")


_CATALOG: tuple[SurveyItem, ...] | None = None


def _load_rows(path) -> tuple[SurveyItem, ...]:
    items = []
    with path.open(encoding="utf-8", newline="") as fh:
        for row in csv.DictReader(fh):
            items.append(
                SurveyItem(
                    item_id=row["item_id"],
                    group=row["group"],
                    topic_label=row["topic_label"],
                    population_desc=row["population_desc"],
                    population_ref=row["population_ref"],
                    first_order_question=row["first_order_question"],
                    first_order_options=row["first_order_options"],
                    belief_target=row["belief_target"],
                    first_order_report=row["first_order_report"],
                    smaller_amount_clause=row["smaller_amount_clause"],
                    second_order_options=row["second_order_options"],
                    scale_lo=float(row["scale_lo"]),
                    scale_hi=float(row["scale_hi"]),
                    reconstructed=row["reconstructed"] == "1",
                    editorial_note=row["editorial_note"],
                )
            )
    ids = [it.item_id for it in items]
    if len(ids) != len(set(ids)):
        raise CatalogError("duplicate item_id in catalog file")
    return tuple(items)


def load_catalog(path: str | Path | None = None) -> tuple[SurveyItem, ...]:
    """Load the item catalog; defaults to the packaged data file (cached)."""
    global _CATALOG
    if path is not None:
        return _load_rows(Path(path))
    if _CATALOG is None:
        _CATALOG = _load_rows(resources.files("gapcast").joinpath("data/survey_items.csv"))
    return _CATALOG


def get_item(item_id: str) -> SurveyItem:
    for item in load_catalog():
        if item.item_id == item_id:
            return item
    raise UnknownItemError(f"no catalog entry for item_id {item_id!r}")


def list_items(filter: str = "all") -> tuple[SurveyItem, ...]:
    """Items in catalog order; filter is one of global, us_policy, all."""
    if filter not in ("global", "us_policy", "all"):
        raise CatalogError(f"unknown filter {filter!r}")
    items = load_catalog()
    if filter == "all":
        return items
    return tuple(it for it in items if it.group == filter)
