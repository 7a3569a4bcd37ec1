#!/usr/bin/env python3
"""Writes data/synthetic_seven_index.csv: 60 synthetic country-years carrying
all seven indexes plus a fragility label.

Five independent latent drivers feed LAP, AAT, FO, AMS and PSR; DO tracks
LAP (inversely) and LL tracks PSR, so two directions of the correlation
matrix carry almost no variance. The label is a noisy linear mix clipped to
the 0-120 fragility scale.
"""
import csv
import pathlib

import numpy as np

rng = np.random.default_rng(2016)
rows = []
for c in range(12):
    for year in range(2012, 2017):
        f = rng.standard_normal(5)
        e = rng.standard_normal(3)
        lap = max(50.0, 800 + 400 * f[0])
        aat = 24 + 3 * f[1]
        fo = max(0.0, 1.5 + 0.5 * f[2])
        ams = max(0.01, 2 + 0.8 * f[3])
        psr = min(99.0, max(1.0, 40 + 12 * f[4]))
        do = max(0.0, 1.0 + 0.3 * (-0.97 * f[0] + 0.24 * e[0]))
        ll = 5 + 1.5 * (0.97 * f[4] + 0.24 * e[1])
        fsi = min(115.0, max(5.0, 70 - 8 * f[0] + 6 * f[1] + 5 * f[2] + 4 * f[3] - 10 * f[4] + 2 * e[2]))
        rows.append([f"Synth-{c + 1:02d}", year, round(lap, 1), round(aat, 2), round(fo, 3),
                     round(ams, 3), round(psr, 1), round(ll, 3), round(do, 3), round(fsi, 1)])

out = pathlib.Path(__file__).resolve().parent.parent / "data" / "synthetic_seven_index.csv"
with out.open("w", newline="") as fh:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["country", "year", "lap_mm", "aat_c", "fo", "ams_pct", "psr_pct", "ll", "do", "fsi"])
    w.writerows(rows)
