"""Machine-checkable certificates.

Every predicate in the toolkit returns a Certificate instead of a bare bool:
the certificate records each checked quantity with its extremal value, the
grid point where the extremum occurred, and the bound it was compared
against.  Failed certificates therefore carry their own diagnosis, and
reports are deterministic (no timestamps) so identical inputs hash
identically.
"""

from __future__ import annotations

import hashlib
import json

import numpy as np


def _as_float(x):
    return float(np.asarray(x).reshape(-1)[0]) if np.ndim(x) else float(x)


class Certificate:
    """Outcome of one verification, with per-quantity margins.

    Parameters
    ----------
    name : str
        What was verified (e.g. ``"shs"``, ``"taming"``).

    Notes
    -----
    Checks are added with :meth:`add_lower`, :meth:`add_upper` and
    :meth:`add_residual`; ``passed`` is the conjunction of all recorded
    checks.  ``details`` holds free-form context (chosen constants, chart
    tags) that does not affect pass/fail.
    """

    def __init__(self, name):
        self.name = name
        self.checks = []
        self.details = {}

    # -- recording ----------------------------------------------------------

    def add_lower(self, quantity, values, bound, grid=None):
        """Record the check ``min(values) >= bound``."""
        values = np.asarray(values, dtype=float)
        k = int(np.argmin(values))
        rec = {
            "quantity": quantity,
            "kind": "lower",
            "extremum": float(values.reshape(-1)[np.argmin(values.reshape(-1))]),
            "bound": _as_float(bound),
            "argext": self._locate(values, k, grid),
            "passed": bool(np.min(values) >= _as_float(bound)),
        }
        self.checks.append(rec)
        return rec["passed"]

    def add_upper(self, quantity, values, bound, grid=None):
        """Record the check ``max(values) <= bound``."""
        values = np.asarray(values, dtype=float)
        k = int(np.argmax(values))
        rec = {
            "quantity": quantity,
            "kind": "upper",
            "extremum": float(values.reshape(-1)[np.argmax(values.reshape(-1))]),
            "bound": _as_float(bound),
            "argext": self._locate(values, k, grid),
            "passed": bool(np.max(values) <= _as_float(bound)),
        }
        self.checks.append(rec)
        return rec["passed"]

    def add_residual(self, quantity, values, tolerance, grid=None):
        """Record the check ``max(|values|) < tolerance``."""
        return self.add_upper(quantity, np.abs(np.asarray(values, dtype=float)),
                              tolerance, grid=grid)

    def add_flag(self, quantity, ok, note=""):
        """Record a boolean check that has no numeric margin."""
        self.checks.append({
            "quantity": quantity, "kind": "flag",
            "extremum": float(bool(ok)), "bound": 1.0,
            "argext": note, "passed": bool(ok),
        })
        return bool(ok)

    @staticmethod
    def _locate(values, flat_index, grid):
        if grid is None:
            return int(flat_index)
        grid = np.asarray(grid)
        if grid.shape == np.asarray(values).shape:
            return float(grid.reshape(-1)[flat_index])
        return int(flat_index)

    # -- interrogation --------------------------------------------------------

    @property
    def passed(self):
        return all(c["passed"] for c in self.checks) and bool(self.checks)

    def margin(self, quantity):
        """Signed margin of the named check (positive = passed with room)."""
        for c in self.checks:
            if c["quantity"] == quantity:
                if c["kind"] == "lower":
                    return c["extremum"] - c["bound"]
                return c["bound"] - c["extremum"]
        raise KeyError(quantity)

    def failures(self):
        return [c for c in self.checks if not c["passed"]]

    # -- serialization -------------------------------------------------------

    def to_dict(self):
        return {
            "certificate": self.name,
            "passed": self.passed,
            "checks": self.checks,
            "details": self.details,
        }

    def content_hash(self):
        """Deterministic hash of the certificate content (for SVG embedding)."""
        blob = json.dumps(self.to_dict(), sort_keys=True, default=str)
        return hashlib.sha256(blob.encode()).hexdigest()[:16]

    def report_lines(self):
        """Human-readable summary, one line per check."""
        lines = ["[%s] %s" % ("PASS" if self.passed else "FAIL", self.name)]
        for c in self.checks:
            sym = {"lower": ">=", "upper": "<=", "flag": "=="}[c["kind"]]
            lines.append("  %-6s %-38s %.6g %s %.6g  (at %s)" % (
                "ok" if c["passed"] else "FAIL", c["quantity"],
                c["extremum"], sym, c["bound"], c["argext"]))
        return lines

    def __repr__(self):
        return "Certificate(%r, passed=%s, checks=%d)" % (
            self.name, self.passed, len(self.checks))


def merge(name, certificates):
    """Bundle several certificates into one (pass = all pass)."""
    out = Certificate(name)
    for cert in certificates:
        out.add_flag(cert.name, cert.passed)
        out.details[cert.name] = cert.to_dict()
    return out
