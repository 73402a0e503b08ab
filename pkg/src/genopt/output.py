"""CSV and SVG writers. Files are written atomically (temp file + rename)."""
from __future__ import annotations

import csv
import io
import os
import tempfile

import numpy as np


def fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".9g")


def write_atomic(path, text: str):
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([c if isinstance(c, str) else fmt(c) for c in row])
    return buf.getvalue()


def trace_header(p: int, n_niches: int) -> list[str]:
    return (["generation", "best_cost", "mean_cost", "median_cost"]
            + [f"best_x_{j}" for j in range(p)]
            + ["diversity", "evaluations"]
            + [f"niche_{i}" for i in range(n_niches)])


def trace_csv(trace, p: int) -> str:
    first = trace.rows[0].niche_counts
    header = trace_header(p, 0 if first is None else len(first))
    rows = []
    for r in trace.rows:
        rows.append([r.generation, r.best_cost, r.mean_cost, r.median_cost, *r.best_x,
                     r.diversity, r.evaluations, *(r.niche_counts or ())])
    return csv_text(header, rows)


def _cell(text: str):
    for conv in (int, float):
        try:
            return conv(text)
        except ValueError:
            pass
    return text


def reserialize_csv(text: str) -> str:
    """Parse a written CSV and print it back with the same number format."""
    rows = list(csv.reader(io.StringIO(text)))
    return csv_text(rows[0], [[_cell(c) for c in row] for row in rows[1:]])


# --- SVG ---------------------------------------------------------------------

_W, _H, _M = 480, 480, 48


def _color(frac: float) -> str:
    # light blue -> dark red
    a = np.array([120, 170, 230])
    b = np.array([150, 20, 30])
    c = (a + (b - a) * frac).round().astype(int)
    return f"#{c[0]:02x}{c[1]:02x}{c[2]:02x}"


class _Canvas:
    def __init__(self, lo, hi, title, xlabel, ylabel):
        self.lo = np.asarray(lo, dtype=float)
        self.hi = np.asarray(hi, dtype=float)
        span = self.hi - self.lo
        span[span == 0] = 1.0
        self.span = span
        self.parts = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" viewBox="0 0 {_W} {_H}">',
            f'<rect x="0" y="0" width="{_W}" height="{_H}" fill="white"/>',
            f'<rect x="{_M}" y="{_M}" width="{_W - 2 * _M}" height="{_H - 2 * _M}" fill="none" stroke="black"/>',
            f'<text x="{_W / 2}" y="{_M / 2}" text-anchor="middle" font-size="14">{title}</text>',
            f'<text x="{_W / 2}" y="{_H - 10}" text-anchor="middle" font-size="12">{xlabel}</text>',
            f'<text x="14" y="{_H / 2}" text-anchor="middle" font-size="12" transform="rotate(-90 14 {_H / 2})">{ylabel}</text>',
            f'<text x="{_M}" y="{_H - _M + 16}" text-anchor="middle" font-size="10">{fmt(self.lo[0])}</text>',
            f'<text x="{_W - _M}" y="{_H - _M + 16}" text-anchor="middle" font-size="10">{fmt(self.hi[0])}</text>',
            f'<text x="{_M - 6}" y="{_H - _M}" text-anchor="end" font-size="10">{fmt(self.lo[1])}</text>',
            f'<text x="{_M - 6}" y="{_M + 4}" text-anchor="end" font-size="10">{fmt(self.hi[1])}</text>',
        ]

    def xy(self, pt):
        u = (pt - self.lo) / self.span
        return _M + u[0] * (_W - 2 * _M), _H - _M - u[1] * (_H - 2 * _M)

    def circle(self, pt, color, r=3):
        x, y = self.xy(pt)
        self.parts.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="{r}" fill="{color}" fill-opacity="0.8"/>')

    def cross(self, pt, size=6):
        x, y = self.xy(pt)
        self.parts.append(
            f'<path d="M{x - size:.2f},{y - size:.2f}L{x + size:.2f},{y + size:.2f}'
            f'M{x - size:.2f},{y + size:.2f}L{x + size:.2f},{y - size:.2f}" stroke="black" stroke-width="2"/>'
        )

    def text(self, x, y, s, color="black"):
        self.parts.append(f'<text x="{x}" y="{y}" font-size="11" fill="{color}">{s}</text>')

    def render(self) -> str:
        return "\n".join(self.parts + ["</svg>"]) + "\n"


def population_svg(snapshots: dict, lo, hi, centers=None) -> str:
    """Scatter of decoded populations, one colour per recorded generation."""
    gens = sorted(snapshots)
    cv = _Canvas(lo, hi, "population by generation", "x_0", "x_1")
    last = max(gens[-1], 1)
    for i, g in enumerate(gens):
        col = _color(g / last)
        for pt in snapshots[g]:
            cv.circle(pt, col)
        cv.text(_W - _M + 4, _M + 14 * i + 10, f"t={g}", col)
    if centers is not None:
        for c in centers:
            cv.cross(np.asarray(c))
    return cv.render()


def front_svg(objs) -> str:
    objs = np.asarray(objs, dtype=float)
    cv = _Canvas(objs.min(axis=0), objs.max(axis=0), "Pareto front", "f_0", "f_1")
    for pt in objs:
        cv.circle(pt, "#1f4e9a")
    return cv.render()
