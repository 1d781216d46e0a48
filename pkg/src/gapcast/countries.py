"""Country-level records: loading, validation, and perception-gap arithmetic.

The row unit of every experiment is one country with its covariates, its
first-order willingness share, and the observed mean second-order belief.
Missingness is explicit (``None``), never encoded as 0, and survives a
save/load round trip.
"""

from __future__ import annotations

import csv
import hashlib
import math
from dataclasses import dataclass, fields as _dc_fields, replace
from importlib import resources
from pathlib import Path

CONTINENTS = (
    "Africa",
    "Asia",
    "Europe",
    "North America",
    "South America",
    "Oceania",
)

SCHEMA_VERSION = "v1"

# On-disk column order; docs/dataset_schema.md is the normative description.
COLUMNS = (
    "country_name",
    "iso3",
    "continent",
    "mean_age",
    "tertiary_education_pct",
    "religiosity_pct",
    "gdp_pc_ppp_2021",
    "top1_income_share_pct",
    "top1_wealth_share_pct",
    "hdi_2021",
    "avg_temp_2010_2019",
    "internet_penetration_pct",
    "willing_1pct",
    "willing_smaller_pct",
    "perceived_willing_pct",
    "sample_n",
)

PERCENT_FIELDS = (
    "tertiary_education_pct",
    "religiosity_pct",
    "top1_income_share_pct",
    "top1_wealth_share_pct",
    "internet_penetration_pct",
    "willing_1pct",
    "willing_smaller_pct",
    "perceived_willing_pct",
)

# Every optional numeric input a record can carry; the default completeness
# set for complete_subset().
COVARIATE_FIELDS = (
    "mean_age",
    "tertiary_education_pct",
    "religiosity_pct",
    "gdp_pc_ppp_2021",
    "top1_income_share_pct",
    "top1_wealth_share_pct",
    "hdi_2021",
    "avg_temp_2010_2019",
    "internet_penetration_pct",
    "willing_1pct",
    "willing_smaller_pct",
    "perceived_willing_pct",
)

# The eight predictors used in the benchmark regression table.
TABLE1_COLUMNS = (
    "willing_1pct",
    "mean_age",
    "tertiary_education_pct",
    "religiosity_pct",
    "hdi_2021",
    "gdp_pc_ppp_2021",
    "top1_income_share_pct",
    "avg_temp_2010_2019",
)


class DatasetError(Exception):
    """Base class for dataset loading/validation failures."""


class SchemaMismatchError(DatasetError):
    """Header row does not match the documented column schema."""


class ValueOutOfRangeError(DatasetError):
    """A cell value violates a field invariant; names row and column."""

    def __init__(self, row: int, column: str, message: str):
        super().__init__(f"row {row}, column {column!r}: {message}")
        self.row = row
        self.column = column


class UnknownCountryError(DatasetError):
    """Country has no continent assignment and none was supplied."""


class MissingFieldError(DatasetError):
    """An operation needs a field that is absent on the record."""


class InsufficientDataError(DatasetError):
    """Too few usable records for the requested statistic."""


@dataclass(frozen=True)
class CountryRecord:
    country_name: str
    continent: str
    iso3: str | None = None
    mean_age: float | None = None
    tertiary_education_pct: float | None = None
    religiosity_pct: float | None = None
    gdp_pc_ppp_2021: float | None = None
    top1_income_share_pct: float | None = None
    top1_wealth_share_pct: float | None = None
    hdi_2021: float | None = None
    avg_temp_2010_2019: float | None = None
    internet_penetration_pct: float | None = None
    willing_1pct: float | None = None
    willing_smaller_pct: float | None = None
    perceived_willing_pct: float | None = None
    sample_n: int | None = None

    def __post_init__(self):
        if not self.country_name:
            raise ValueOutOfRangeError(0, "country_name", "must be non-empty")
        if self.continent not in CONTINENTS:
            raise ValueOutOfRangeError(
                0, "continent", f"{self.continent!r} is not one of {CONTINENTS}"
            )
        _validate_numeric_fields(self, row=0)

    def get(self, field: str):
        return getattr(self, field)

    def with_values(self, **changes) -> "CountryRecord":
        return replace(self, **changes)


@dataclass(frozen=True)
class Dataset:
    records: tuple[CountryRecord, ...]
    source_label: str = ""
    as_of: str | None = None

    def __post_init__(self):
        seen = set()
        for rec in self.records:
            if rec.country_name in seen:
                raise DatasetError(f"duplicate country_name {rec.country_name!r}")
            seen.add(rec.country_name)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def by_name(self, name: str) -> CountryRecord:
        for rec in self.records:
            if rec.country_name == name:
                return rec
        raise KeyError(name)


def _validate_numeric_fields(rec: CountryRecord, row: int) -> None:
    for f in PERCENT_FIELDS:
        v = getattr(rec, f)
        if v is not None and not 0.0 <= v <= 100.0:
            raise ValueOutOfRangeError(row, f, f"{v} outside [0, 100]")
    if rec.hdi_2021 is not None and not 0.0 <= rec.hdi_2021 <= 1.0:
        raise ValueOutOfRangeError(row, "hdi_2021", f"{rec.hdi_2021} outside [0, 1]")
    if rec.gdp_pc_ppp_2021 is not None and rec.gdp_pc_ppp_2021 <= 0:
        raise ValueOutOfRangeError(
            row, "gdp_pc_ppp_2021", f"{rec.gdp_pc_ppp_2021} must be > 0"
        )
    if rec.sample_n is not None and rec.sample_n < 1:
        raise ValueOutOfRangeError(row, "sample_n", f"{rec.sample_n} must be >= 1")
    if rec.mean_age is not None and not 0.0 < rec.mean_age < 130.0:
        raise ValueOutOfRangeError(row, "mean_age", f"{rec.mean_age} implausible")


_CONTINENT_TABLE: dict[str, str] | None = None


def continent_table() -> dict[str, str]:
    """Static name -> continent map shipped with the package."""
    global _CONTINENT_TABLE
    if _CONTINENT_TABLE is None:
        table = {}
        path = resources.files("gapcast").joinpath("data/continents.csv")
        with path.open(encoding="utf-8", newline="") as fh:
            for row in csv.DictReader(fh):
                table[row["country_name"]] = row["continent"]
        _CONTINENT_TABLE = table
    return _CONTINENT_TABLE


def continent_for(name: str) -> str:
    """Continent for a country name; unknown names fail loudly."""
    table = continent_table()
    if name not in table:
        raise UnknownCountryError(
            f"no continent assignment for {name!r}; add it to the dataset's "
            "continent column or to data/continents.csv"
        )
    return table[name]


def _parse_cell(row_no: int, column: str, raw: str):
    raw = raw.strip()
    if raw == "":
        return None
    if column == "sample_n":
        try:
            return int(raw)
        except ValueError:
            raise ValueOutOfRangeError(row_no, column, f"{raw!r} is not an integer")
    try:
        return float(raw)
    except ValueError:
        raise ValueOutOfRangeError(row_no, column, f"{raw!r} is not a number")


def load_dataset(
    path: str | Path, schema_version: str = SCHEMA_VERSION, source_label: str | None = None
) -> Dataset:
    """Load a delimited country table.

    Empty cells become explicit missing values; row order is preserved.
    A blank continent cell is filled from the static table and fails loudly
    for countries the table does not know.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(path)
    if schema_version != SCHEMA_VERSION:
        raise SchemaMismatchError(f"unsupported schema version {schema_version!r}")

    with path.open(encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaMismatchError("file has no header row")
        if tuple(header) != COLUMNS:
            missing = [c for c in COLUMNS if c not in header]
            extra = [c for c in header if c not in COLUMNS]
            raise SchemaMismatchError(
                f"header mismatch: missing columns {missing}, extra columns {extra}"
            )
        records = []
        for row_no, row in enumerate(reader, start=2):
            if len(row) != len(COLUMNS):
                raise SchemaMismatchError(
                    f"row {row_no}: expected {len(COLUMNS)} cells, got {len(row)}"
                )
            cells = dict(zip(COLUMNS, row))
            name = cells["country_name"].strip()
            if not name:
                raise ValueOutOfRangeError(row_no, "country_name", "must be non-empty")
            continent = cells["continent"].strip()
            if not continent:
                continent = continent_for(name)
            if continent not in CONTINENTS:
                raise ValueOutOfRangeError(
                    row_no, "continent", f"{continent!r} is not one of {CONTINENTS}"
                )
            iso3 = cells["iso3"].strip() or None
            if iso3 is not None and (len(iso3) != 3 or not iso3.isalpha()):
                raise ValueOutOfRangeError(row_no, "iso3", f"{iso3!r} is not 3 letters")
            kwargs = {}
            for column in COLUMNS[3:]:
                kwargs[column] = _parse_cell(row_no, column, cells[column])
            try:
                rec = CountryRecord(
                    country_name=name, continent=continent, iso3=iso3, **kwargs
                )
            except ValueOutOfRangeError as exc:
                raise ValueOutOfRangeError(row_no, exc.column, str(exc)) from None
            records.append(rec)

    ds = Dataset(records=tuple(records), source_label=source_label or path.name)
    return ds


def _cell_text(value) -> str:
    if value is None:
        return ""
    if isinstance(value, int):
        return str(value)
    return repr(float(value))


def save_dataset(ds: Dataset, path: str | Path) -> None:
    """Write a dataset back to the delimited schema; round-trips exactly."""
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(COLUMNS)
        for rec in ds.records:
            row = [rec.country_name, rec.iso3 or "", rec.continent]
            row += [_cell_text(getattr(rec, c)) for c in COLUMNS[3:]]
            writer.writerow(row)


def dataset_hash(ds: Dataset) -> str:
    """Content hash over the canonical serialized records."""
    h = hashlib.sha256()
    for rec in ds.records:
        row = [rec.country_name, rec.iso3 or "", rec.continent]
        row += [_cell_text(getattr(rec, c)) for c in COLUMNS[3:]]
        h.update("\x1f".join(row).encode("utf-8"))
        h.update(b"\n")
    return h.hexdigest()


def compute_perception_gap(record: CountryRecord) -> float:
    """Perceived minus actual willingness, in signed percentage points.

    Negative values mean the public underestimates others' willingness.
    """
    if record.willing_1pct is None:
        raise MissingFieldError(f"{record.country_name}: willing_1pct is missing")
    if record.perceived_willing_pct is None:
        raise MissingFieldError(
            f"{record.country_name}: perceived_willing_pct is missing"
        )
    return record.perceived_willing_pct - record.willing_1pct


def dataset_gap_summary(ds: Dataset) -> dict:
    """Unweighted mean gap with a normal-approximation 95% CI."""
    gaps = []
    for rec in ds.records:
        if rec.willing_1pct is not None and rec.perceived_willing_pct is not None:
            gaps.append(compute_perception_gap(rec))
    n = len(gaps)
    if n < 2:
        raise InsufficientDataError(f"need >= 2 usable records, got {n}")
    mean = sum(gaps) / n
    var = sum((g - mean) ** 2 for g in gaps) / (n - 1)
    se = math.sqrt(var / n)
    return {
        "mean_gap": mean,
        "abs_mean_gap": abs(mean),
        "ci95_lo": mean - 1.96 * se,
        "ci95_hi": mean + 1.96 * se,
        "n": n,
    }


def complete_subset(ds: Dataset, columns: tuple[str, ...] | None = None) -> Dataset:
    """Records with every listed covariate present, original order kept."""
    cols = columns if columns is not None else COVARIATE_FIELDS
    kept = tuple(
        rec for rec in ds.records if all(getattr(rec, c) is not None for c in cols)
    )
    return Dataset(records=kept, source_label=ds.source_label, as_of=ds.as_of)
