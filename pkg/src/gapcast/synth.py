"""Synthetic datasets and fixtures for offline verification.

The mechanism dataset ties the ground-truth second-order belief to the same
projection rule the offline projection agent implements, so an agent that
reads the prompt's willingness figure scores near-zero error at full
information and the falsification suite has known correct answers.
"""

from __future__ import annotations

import math

import numpy as np

from .countries import CONTINENTS, CountryRecord, Dataset

# Paper-anchored fixture row used by the golden-prompt tests and the CLI
# golden-diff mode.
ARGENTINA = dict(
    country_name="Argentina",
    iso3="ARG",
    continent="South America",
    mean_age=42.1,
    tertiary_education_pct=10.8,
    religiosity_pct=52.3,
    gdp_pc_ppp_2021=29484.0,
    top1_income_share_pct=13.0,
    top1_wealth_share_pct=24.9,
    hdi_2021=0.842,
    avg_temp_2010_2019=15.3,
    internet_penetration_pct=87.2,
    willing_1pct=62.2,
    willing_smaller_pct=14.3,
    perceived_willing_pct=38.1,
    sample_n=1000,
)


def argentina_record() -> CountryRecord:
    return CountryRecord(**ARGENTINA)


def projection_truth(willing: float) -> float:
    """Second-order belief implied by downward-biased social projection."""
    return round(min(100.0, max(0.0, 0.8 * willing - 10.0)), 1)


def make_mechanism_dataset(n: int = 60, seed: int = 0) -> Dataset:
    """Synthetic countries whose truth follows the projection rule.

    Countries are split across a poor pool (GDP < $5,000), a mid band, and a
    rich pool (GDP > $40,000), with willingness tied to the pool so that
    name-mismatch diagnostics have large cross-pool contrasts.
    """
    rng = np.random.default_rng([seed, 929])
    records = []
    for i in range(n):
        band = i % 3  # 0 poor, 1 mid, 2 rich
        if band == 0:
            gdp = float(rng.uniform(900, 4500))
            willing = float(rng.uniform(20, 45))
        elif band == 1:
            gdp = float(rng.uniform(9000, 35000))
            willing = float(rng.uniform(40, 60))
        else:
            gdp = float(rng.uniform(45000, 90000))
            willing = float(rng.uniform(60, 85))
        willing = round(willing, 1)
        hdi = round(float(np.clip(0.35 + 0.55 * (math.log10(gdp) - 3) / 2, 0.2, 0.98)), 3)
        records.append(
            CountryRecord(
                country_name=f"Synthland {i + 1:03d}",
                continent=CONTINENTS[i % len(CONTINENTS)],
                mean_age=round(float(rng.uniform(22, 48)), 1),
                tertiary_education_pct=round(float(rng.uniform(5, 45)), 1),
                religiosity_pct=round(float(rng.uniform(15, 95)), 1),
                gdp_pc_ppp_2021=round(gdp, 0),
                top1_income_share_pct=round(float(rng.uniform(8, 25)), 1),
                top1_wealth_share_pct=round(float(rng.uniform(18, 45)), 1),
                hdi_2021=hdi,
                avg_temp_2010_2019=round(float(rng.uniform(-2, 28)), 1),
                internet_penetration_pct=round(float(rng.uniform(15, 98)), 1),
                willing_1pct=willing,
                willing_smaller_pct=round(float(rng.uniform(5, 20)), 1),
                perceived_willing_pct=projection_truth(willing),
                sample_n=1000,
            )
        )
    return Dataset(records=tuple(records), source_label=f"mechanism-synth-{seed}")


def make_regression_dataset(
    n: int = 125,
    seed: int = 0,
    willing_coef: float = 0.79,
    top1_coef: float = 0.13,
    target_r2: float = 0.59,
) -> Dataset:
    """Countries whose perceived willingness follows a known linear model.

    Coefficients are on the standardized scale; noise variance is set so the
    population R-squared equals ``target_r2``.
    """
    rng = np.random.default_rng([seed, 1717])
    z = rng.standard_normal((n, 8))
    signal_var = willing_coef**2 + top1_coef**2
    noise_sd = math.sqrt(signal_var * (1.0 - target_r2) / target_r2)
    y_z = willing_coef * z[:, 0] + top1_coef * z[:, 6] + noise_sd * rng.standard_normal(n)

    def clip_pct(arr):
        return np.clip(arr, 0.5, 99.5)

    willing = clip_pct(60 + 10 * z[:, 0])
    age = np.clip(34 + 6 * z[:, 1], 16, 60)
    education = clip_pct(22 + 8 * z[:, 2])
    religiosity = clip_pct(55 + 15 * z[:, 3])
    hdi = np.clip(0.72 + 0.08 * z[:, 4], 0.25, 0.99)
    gdp = np.exp(9.8 + 0.7 * z[:, 5])
    top1 = clip_pct(15 + 4 * z[:, 6])
    temp = 14 + 8 * z[:, 7]
    perceived = clip_pct(40 + 12 * y_z)

    records = []
    for i in range(n):
        records.append(
            CountryRecord(
                country_name=f"Regland {i + 1:03d}",
                continent=CONTINENTS[i % len(CONTINENTS)],
                mean_age=float(age[i]),
                tertiary_education_pct=float(education[i]),
                religiosity_pct=float(religiosity[i]),
                gdp_pc_ppp_2021=float(gdp[i]),
                top1_income_share_pct=float(top1[i]),
                top1_wealth_share_pct=float(clip_pct(top1[i] * 2.1)),
                hdi_2021=float(hdi[i]),
                avg_temp_2010_2019=float(temp[i]),
                internet_penetration_pct=float(clip_pct(45 + 40 * (hdi[i] - 0.72))),
                willing_1pct=float(willing[i]),
                willing_smaller_pct=float(clip_pct(12 + 2 * rng.standard_normal())),
                perceived_willing_pct=float(perceived[i]),
                sample_n=1000,
            )
        )
    return Dataset(records=tuple(records), source_label=f"regression-synth-{seed}")
