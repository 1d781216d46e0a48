"""Deterministic rendering of the system prompt and staged/perturbed user prompts.

Rendering is byte-reproducible: the golden files under ``data/golden/`` are
the normative output and the templates here must match them, not vice versa.
Stage and ablation prompts are derived from the full prompt by deletion:
removing an information block removes its sentences and its entry in the
instruction sentence's category list, leaving all remaining text fixed.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from importlib import resources

from .catalog import GLOBAL_ITEM_ID, SurveyItem, get_item
from .countries import CountryRecord

MISSING_TEXT = "data not available"

BLOCK_ORDER = ("demographics", "economics", "temperature", "own_willingness")

BLOCK_FIELDS = {
    "demographics": ("mean_age", "tertiary_education_pct", "religiosity_pct"),
    "economics": (
        "gdp_pc_ppp_2021",
        "top1_income_share_pct",
        "top1_wealth_share_pct",
        "hdi_2021",
    ),
    "temperature": ("avg_temp_2010_2019",),
    "own_willingness": ("willing_1pct", "willing_smaller_pct"),
}

# Stages 2-5 pair the country name with one block each; 6-8 are the stated
# combinations (stage 6 = demographics + economics, 7 adds temperature,
# 8 adds willingness).
STAGE_BLOCKS = {
    1: (),
    2: ("demographics",),
    3: ("economics",),
    4: ("temperature",),
    5: ("own_willingness",),
    6: ("demographics", "economics"),
    7: ("demographics", "economics", "temperature"),
    8: ("demographics", "economics", "temperature", "own_willingness"),
}

ABLATION_FIELDS = {
    "no_econ": (
        "gdp_pc_ppp_2021",
        "top1_income_share_pct",
        "top1_wealth_share_pct",
        "hdi_2021",
    ),
    "no_religion": ("religiosity_pct",),
    # demographics go, GDP stays as a coarse development proxy
    "no_demo": ("mean_age", "tertiary_education_pct", "religiosity_pct"),
    "no_climate": ("avg_temp_2010_2019",),
    "no_own_willingness": ("willing_1pct", "willing_smaller_pct"),
    "name_only": tuple(f for b in BLOCK_ORDER for f in BLOCK_FIELDS[b]),
}

CF_IDS = ("cf_willingness_flip", "cf_gdp_flip", "cf_name_mismatch")

FORMATS = ("natural", "structured")

_CATEGORY_TOKENS = {
    "demographics": "socio-demographic",
    "economics": "macro-economic indicators",
    "temperature": "temperature data",
    "own_willingness": "the actual willingness data",
}

_BULLET_LABELS = {
    "mean_age": "Average age of respondents",
    "tertiary_education_pct": "Completed tertiary education",
    "religiosity_pct": "Say religion is important in daily life",
    "gdp_pc_ppp_2021": "GDP per capita (PPP, 2021)",
    "top1_income_share_pct": "Top 1% share of total income",
    "top1_wealth_share_pct": "Top 1% share of total wealth",
    "hdi_2021": "Human Development Index (2021)",
    "avg_temp_2010_2019": "Average temperature from 2010 to 2019",
    "willing_1pct": "Personally willing to contribute",
    "willing_smaller_pct": "Would contribute a smaller amount",
}


class PromptError(Exception):
    pass


class RenderError(PromptError):
    """A structurally required template field is absent."""


class UnknownFieldError(PromptError):
    pass


@dataclass(frozen=True)
class PromptCondition:
    """Which information blocks are present, under which rule, in which format."""

    kind: str  # stage | ablation | counterfactual
    stage_id: int | None = None
    ablation_id: str | None = None
    cf_id: str | None = None
    format: str = "natural"

    def __post_init__(self):
        if self.kind not in ("stage", "ablation", "counterfactual"):
            raise PromptError(f"unknown condition kind {self.kind!r}")
        if self.format not in FORMATS:
            raise PromptError(f"unknown format {self.format!r}")
        set_ids = [
            self.stage_id is not None,
            self.ablation_id is not None,
            self.cf_id is not None,
        ]
        if sum(set_ids) != 1:
            raise PromptError("exactly one of stage_id/ablation_id/cf_id must be set")
        if self.kind == "stage":
            if self.stage_id not in STAGE_BLOCKS:
                raise PromptError(f"stage_id must be 1..8, got {self.stage_id!r}")
        elif self.kind == "ablation":
            if self.ablation_id not in ABLATION_FIELDS:
                raise PromptError(f"unknown ablation_id {self.ablation_id!r}")
        else:
            if self.cf_id not in CF_IDS:
                raise PromptError(f"unknown cf_id {self.cf_id!r}")

    @property
    def label(self) -> str:
        if self.kind == "stage":
            return f"stage:{self.stage_id}:{self.format}"
        if self.kind == "ablation":
            return f"ablation:{self.ablation_id}:{self.format}"
        return f"cf:{self.cf_id}:{self.format}"

    @staticmethod
    def stage(stage_id: int, format: str = "natural") -> "PromptCondition":
        return PromptCondition(kind="stage", stage_id=stage_id, format=format)

    @staticmethod
    def ablation(ablation_id: str, format: str = "natural") -> "PromptCondition":
        return PromptCondition(kind="ablation", ablation_id=ablation_id, format=format)

    @staticmethod
    def counterfactual(cf_id: str, format: str = "natural") -> "PromptCondition":
        return PromptCondition(kind="counterfactual", cf_id=cf_id, format=format)


def parse_condition_label(label: str) -> PromptCondition:
    """Parse "stage:8", "ablation:no_econ:structured", "cf:cf_gdp_flip"."""
    parts = label.split(":")
    if len(parts) == 2:
        parts.append("natural")
    if len(parts) != 3:
        raise PromptError(f"malformed condition label {label!r}")
    kind, ident, fmt = parts
    if kind == "stage":
        return PromptCondition.stage(int(ident), fmt)
    if kind == "ablation":
        return PromptCondition.ablation(ident, fmt)
    if kind == "cf":
        return PromptCondition.counterfactual(ident, fmt)
    raise PromptError(f"unknown condition kind in label {label!r}")


@dataclass(frozen=True)
class RenderedPrompt:
    system_text: str
    user_text: str
    condition: PromptCondition
    country_name: str
    item_id: str
    content_hash: str = field(default="")

    def __post_init__(self):
        if not self.content_hash:
            object.__setattr__(
                self,
                "content_hash",
                prompt_content_hash(self.system_text, self.user_text, self.item_id),
            )


def prompt_content_hash(system_text: str, user_text: str, item_id: str) -> str:
    h = hashlib.sha256()
    for part in (system_text, user_text, item_id):
        h.update(part.encode("utf-8"))
        h.update(b"\x00")
    return h.hexdigest()


_SYSTEM_TEXT: str | None = None


def render_system_prompt() -> str:
    """The fixed system instruction, read from its golden file (cached)."""
    global _SYSTEM_TEXT
    if _SYSTEM_TEXT is None:
        path = resources.files("gapcast").joinpath("data/golden/system.txt")
        _SYSTEM_TEXT = path.read_text(encoding="utf-8").rstrip("\n")
    return _SYSTEM_TEXT


def format_value(field_id: str, value) -> str:
    """Deterministic display text for one field value.

    Ages/percents/temps render to one decimal, currency with thousands
    separators and no decimals, HDI to three decimals; missing values render
    as the literal unavailability phrase.
    """
    if field_id not in _BULLET_LABELS:
        raise UnknownFieldError(f"unknown field {field_id!r}")
    if value is None:
        return MISSING_TEXT
    if field_id == "mean_age":
        return f"{value:.1f} years"
    if field_id == "gdp_pc_ppp_2021":
        return f"${value:,.0f}"
    if field_id == "hdi_2021":
        return f"{value:.3f}"
    if field_id == "avg_temp_2010_2019":
        return f"{value:.1f}°C"
    return f"{value:.1f}%"


def visible_fields(condition: PromptCondition) -> tuple[str, ...]:
    """Fields shown under a condition, in fixed block order."""
    if condition.kind == "stage":
        blocks = STAGE_BLOCKS[condition.stage_id]
        return tuple(f for b in BLOCK_ORDER if b in blocks for f in BLOCK_FIELDS[b])
    if condition.kind == "ablation":
        hidden = set(ABLATION_FIELDS[condition.ablation_id])
        return tuple(
            f for b in BLOCK_ORDER for f in BLOCK_FIELDS[b] if f not in hidden
        )
    # counterfactuals keep the full stage-8 information set
    return tuple(f for b in BLOCK_ORDER for f in BLOCK_FIELDS[b])


def prompt_facts(
    record: CountryRecord, condition: PromptCondition
) -> list[tuple[str, str]]:
    """Ordered (field, formatted value) pairs a prompt will contain.

    Both the natural and structured renderers consume this list, which is
    what makes the format-parity invariant hold by construction. The
    smaller-amount clause is dropped (not marked unavailable) when that
    field is missing.
    """
    facts = []
    for f in visible_fields(condition):
        value = getattr(record, f)
        if f == "willing_smaller_pct" and value is None:
            continue
        facts.append((f, format_value(f, value)))
    return facts


def _oxford_join(items: list[str]) -> str:
    if not items:
        return ""
    if len(items) == 1:
        return items[0]
    if len(items) == 2:
        return f"{items[0]} and {items[1]}"
    return ", ".join(items[:-1]) + f", and {items[-1]}"


def _block_category_present(condition: PromptCondition, block: str) -> bool:
    vis = set(visible_fields(condition))
    return any(f in vis for f in BLOCK_FIELDS[block])


def render_info_blocks(
    record: CountryRecord,
    condition: PromptCondition,
    item: SurveyItem | None = None,
) -> list[str]:
    """Natural-language sentences for the blocks a condition includes.

    Returns one string per present block, in fixed order (demographics,
    economics, temperature, own willingness). Missing cells render as the
    unavailability phrase; a block whose fields are all suppressed is
    omitted entirely.
    """
    item = item if item is not None else get_item(GLOBAL_ITEM_ID)
    facts = dict(prompt_facts(record, condition))
    blocks = []

    demo_clauses = []
    if "mean_age" in facts:
        demo_clauses.append(f"the average age of respondents is {facts['mean_age']}")
    if "tertiary_education_pct" in facts:
        demo_clauses.append(
            f"{facts['tertiary_education_pct']} of the people have completed a "
            "tertiary education"
        )
    if "religiosity_pct" in facts:
        demo_clauses.append(
            f"{facts['religiosity_pct']} say religion is important in daily life"
        )
    if demo_clauses:
        blocks.append(
            f"In {record.country_name}, {_oxford_join(demo_clauses)}."
        )

    econ_clauses = []
    if "gdp_pc_ppp_2021" in facts:
        econ_clauses.append(f"GDP per capita (PPP, 2021) is {facts['gdp_pc_ppp_2021']}")
    if "top1_income_share_pct" in facts:
        econ_clauses.append(
            f"the top 1% holds {facts['top1_income_share_pct']} of total income"
        )
    if "top1_wealth_share_pct" in facts:
        econ_clauses.append(f"{facts['top1_wealth_share_pct']} of total wealth")
    econ_sentences = []
    if econ_clauses:
        econ_sentences.append(f"{_oxford_join(econ_clauses)}.")
    if "hdi_2021" in facts:
        econ_sentences.append(
            f"The Human Development Index (2021) is {facts['hdi_2021']}."
        )
    if econ_sentences:
        blocks.append(" ".join(econ_sentences))

    if "avg_temp_2010_2019" in facts:
        blocks.append(
            f"The average temperature from 2010 to 2019 is "
            f"{facts['avg_temp_2010_2019']}."
        )

    if "willing_1pct" in facts:
        try:
            sentence = "In this survey, " + item.first_order_report.format(
                willing=facts["willing_1pct"]
            )
            if "willing_smaller_pct" in facts and item.smaller_amount_clause:
                sentence += item.smaller_amount_clause.format(
                    smaller=facts["willing_smaller_pct"]
                )
        except (KeyError, IndexError) as exc:
            raise RenderError(f"bad first-order report template: {exc}") from None
        blocks.append(sentence + ".")

    return blocks


def _structured_bullets(record: CountryRecord, condition: PromptCondition) -> str:
    lines = [
        f"- {_BULLET_LABELS[f]}: {text}" for f, text in prompt_facts(record, condition)
    ]
    return "\n".join(lines)


def _survey_paragraph(item: SurveyItem, country_name: str) -> str:
    population = item.population_desc.replace("{country}", country_name)
    ref = item.population_ref.replace("{country}", country_name)
    return (
        f"In a nationally representative survey with a probability-based sample of "
        f'{population}, respondents were asked: "{item.first_order_question}" '
        f"Responses: {item.first_order_options}. Don't know and refused were coded "
        f"as missing data. Respondents were then asked how many respondents in "
        f"{ref} they think are {item.belief_target}. "
        f"Responses: {item.second_order_options}."
    )


def _instruction_paragraph(
    item: SurveyItem, country_name: str, condition: PromptCondition
) -> str:
    ref = item.population_ref.replace("{country}", country_name)
    categories = ["the country"]
    for block in BLOCK_ORDER:
        if _block_category_present(condition, block):
            categories.append(_CATEGORY_TOKENS[block])
    return (
        f"Based on {_oxford_join(categories)} shown above, estimate what respondents "
        f"in {ref} on average thought about how many **other** respondents in {ref} "
        f"are {item.belief_target}. Note: You are estimating people's beliefs about "
        f"others' willingness, not the actual willingness itself. Respond with a "
        f"single number between 0 and 100, with one decimal place."
    )


def render_user_prompt(
    record: CountryRecord, item: SurveyItem, condition: PromptCondition
) -> RenderedPrompt:
    """Render the full user prompt for one (country, item, condition) cell.

    The text is info blocks, then the survey-context paragraph, then the
    elicitation instruction ending with the single-number format line.
    """
    if condition.format == "structured":
        info = _structured_bullets(record, condition)
    else:
        info = " ".join(render_info_blocks(record, condition, item))
    paragraphs = [p for p in (info,) if p]
    paragraphs.append(_survey_paragraph(item, record.country_name))
    paragraphs.append(_instruction_paragraph(item, record.country_name, condition))
    user_text = "\n\n".join(paragraphs)
    return RenderedPrompt(
        system_text=render_system_prompt(),
        user_text=user_text,
        condition=condition,
        country_name=record.country_name,
        item_id=item.item_id,
    )


def golden_name(fixture: str, condition: PromptCondition) -> str:
    slug = condition.label.replace(":", "_")
    return f"{fixture}__{slug}.txt"


def load_golden(name: str) -> str:
    """Packaged golden text, LF-normalized, without the trailing newline."""
    path = resources.files("gapcast").joinpath(f"data/golden/{name}")
    return path.read_text(encoding="utf-8").rstrip("\n")
