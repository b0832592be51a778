"""Machine-readable check reports.

A report separates a *body* -- everything that is a pure function of the
configuration and the seed -- from a small *header* holding the wall-clock
timestamp and runtime.  Re-running a check with the same inputs therefore
reproduces the body byte for byte.

Margins come in three kinds: ``exact`` (slack 1e-12), ``statistical``
(slack = 3 standard errors, the pre-registered rule used everywhere), and
``unquantified`` (bounds with an unquantified correction term set to zero;
a negative margin there downgrades the verdict to ``inconclusive`` instead
of ``fail``).
"""

from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import dataclass, field

from . import __version__
from .rng import GENERATOR

EXACT_SLACK = 1e-12


@dataclass(frozen=True)
class CheckReport:
    name: str
    params: dict
    seed: int
    estimates: dict
    margins: dict
    flags: dict = field(default_factory=dict)
    notes: tuple[str, ...] = ()
    series: tuple[tuple[float, float, float], ...] = ()
    verdict: str = "pass"

    @classmethod
    def build(cls, name, params, seed, estimates=None, margins=None,
              flags=None, notes=(), series=()):
        """Assemble a report and derive the verdict from the margins.

        estimates: {label: (value, stderr, n)}; margins: {label: (margin,
        slack, kind)} with kind in {exact, statistical, unquantified}.
        """
        est = {k: {"value": float(v), "se": float(se), "n": int(n)}
               for k, (v, se, n) in (estimates or {}).items()}
        mar = {k: {"margin": float(m), "slack": float(s), "kind": kind}
               for k, (m, s, kind) in (margins or {}).items()}
        verdict = "pass"
        for entry in mar.values():
            if entry["margin"] < -entry["slack"]:
                if entry["kind"] == "unquantified":
                    verdict = "inconclusive" if verdict == "pass" else verdict
                else:
                    verdict = "fail"
        return cls(name=name, params=dict(params), seed=int(seed),
                   estimates=est, margins=mar, flags=dict(flags or {}),
                   notes=tuple(notes), series=tuple(series), verdict=verdict)

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def body_record(self) -> dict:
        return {
            "format": "check-report-v1",
            "name": self.name,
            "tool": f"interpolab/{__version__}",
            "rng": GENERATOR,
            "seed": self.seed,
            "params": self.params,
            "estimates": self.estimates,
            "margins": self.margins,
            "flags": self.flags,
            "notes": list(self.notes),
            "series": [list(row) for row in self.series],
            "verdict": self.verdict,
        }

    def body_json(self) -> str:
        return json.dumps(self.body_record(), sort_keys=True, indent=2)

    def to_json(self, runtime_s: float | None = None) -> str:
        doc = {
            "header": {
                "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
                "runtime_s": runtime_s,
            },
            "body": self.body_record(),
        }
        return json.dumps(doc, sort_keys=True, indent=2)

    def csv_text(self) -> str:
        """Flat CSV: one row per point estimate, then one per margin."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["report", "row", "label", "value", "se_or_slack", "n_or_kind"])
        for label in sorted(self.estimates):
            e = self.estimates[label]
            w.writerow([self.name, "estimate", label, repr(e["value"]),
                        repr(e["se"]), e["n"]])
        for label in sorted(self.margins):
            m = self.margins[label]
            w.writerow([self.name, "margin", label, repr(m["margin"]),
                        repr(m["slack"]), m["kind"]])
        return buf.getvalue()

    def plot_data_text(self) -> str:
        """(x, y, yerr) triples for plotting, one per line."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["x", "y", "yerr"])
        for x, y, yerr in self.series:
            w.writerow([repr(float(x)), repr(float(y)), repr(float(yerr))])
        return buf.getvalue()


def write_report(report: CheckReport, path, runtime_s: float | None = None) -> None:
    with open(path, "w") as fh:
        fh.write(report.to_json(runtime_s=runtime_s))
        fh.write("\n")


def dump_record(record: dict) -> str:
    """Canonical JSON for versioned result records (summaries, tables)."""
    return json.dumps(record, sort_keys=True, indent=2) + "\n"
