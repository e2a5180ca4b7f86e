"""Command-line front end.

Input is a JSON matrix document::

    {"n": 1, "hbar": 1.0, "kind": "ellipsoid_M", "data": [[1, 0], [0, 1]]}

``kind`` is one of ``ellipsoid_M``, ``covariance_Sigma``, ``symplectic_S``
(all with ``data``) or ``pure_gaussian`` (with ``X`` and ``Y``). An
``ellipsoid_M`` document may hold a configuration-space ellipsoid
(``n x n``) or a phase-space one (``2n x 2n``). A file argument of ``-``
reads standard input.

Results go to stdout as JSON. Exit codes: 0 success, 1 negative verdict,
2 invalid input, 3 internal numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Any, Optional

import numpy as np

from . import capacity, ellipsoid as ell, gaussian as gs, verify as vf
from .matcore import TOL_RECON, InvalidMatrixError, NumericalError, Tolerances
from .symplectic import is_symplectic, symplectic_eigenvalues, williamson

EXIT_OK, EXIT_NEGATIVE, EXIT_INVALID, EXIT_INTERNAL = 0, 1, 2, 3
KINDS = ("ellipsoid_M", "covariance_Sigma", "pure_gaussian", "symplectic_S")


class InputError(ValueError):
    pass


class Document:
    """A parsed and shape-checked matrix document."""

    def __init__(self, raw: Any, hbar_override: Optional[float] = None):
        if not isinstance(raw, dict):
            raise InputError("document must be a JSON object")
        self.kind = raw.get("kind")
        if self.kind not in KINDS:
            raise InputError(f"kind must be one of {list(KINDS)}, got {self.kind!r}")
        n = raw.get("n")
        if not isinstance(n, int) or isinstance(n, bool) or n < 1:
            raise InputError(f"n must be a positive integer, got {n!r}")
        self.n = n
        hbar = raw.get("hbar", 1.0) if hbar_override is None else hbar_override
        if isinstance(hbar, bool) or not isinstance(hbar, (int, float)) or not math.isfinite(hbar) or hbar <= 0:
            raise InputError(f"hbar must be a positive number, got {hbar!r}")
        self.hbar = float(hbar)
        if self.kind == "pure_gaussian":
            self.X = self._array(raw, "X", (n,))
            self.Y = self._array(raw, "Y", (n,))
        else:
            sizes = (n, 2 * n) if self.kind == "ellipsoid_M" else (2 * n,)
            self.data = self._array(raw, "data", sizes)

    @staticmethod
    def _array(raw: dict, key: str, sizes) -> np.ndarray:
        if key not in raw:
            raise InputError(f"missing field {key!r}")
        try:
            a = np.array(raw[key], dtype=float)
        except (TypeError, ValueError) as exc:
            raise InputError(f"field {key!r} is not a numeric matrix") from exc
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] not in sizes:
            raise InputError(f"field {key!r} has shape {a.shape}; expected square of size {' or '.join(map(str, sizes))}")
        return a

    @property
    def phase_space(self) -> bool:
        return self.kind != "ellipsoid_M" or self.data.shape[0] == 2 * self.n

    def ellipsoid(self, tol: float) -> ell.Ellipsoid:
        """Phase-space (or configuration-space) ellipsoid described by the document."""
        if self.kind == "ellipsoid_M":
            return ell.Ellipsoid(self.data, self.hbar)
        if self.kind == "covariance_Sigma":
            return gs.covariance_ellipsoid(self.mixed())
        if self.kind == "pure_gaussian":
            return gs.to_blob(self.pure())
        return ell.blob_from_symplectic(self.data, self.hbar, tol)

    def phase_ellipsoid(self, tol: float) -> ell.Ellipsoid:
        if not self.phase_space:
            raise InputError("command needs a phase-space (2n x 2n) ellipsoid")
        return self.ellipsoid(tol)

    def config_ellipsoid(self) -> ell.Ellipsoid:
        if self.kind != "ellipsoid_M" or self.phase_space:
            raise InputError("command needs a configuration-space (n x n) ellipsoid_M document")
        return ell.Ellipsoid(self.data, self.hbar)

    def pure(self) -> gs.PureGaussian:
        if self.kind != "pure_gaussian":
            raise InputError("command needs a pure_gaussian document")
        return gs.PureGaussian(self.X, self.Y, self.hbar)

    def mixed(self) -> gs.MixedGaussian:
        if self.kind == "pure_gaussian":
            return gs.as_density(self.pure())
        if self.kind != "covariance_Sigma":
            raise InputError("command needs a covariance_Sigma or pure_gaussian document")
        return gs.MixedGaussian(self.data, None, self.hbar)


def _matrix_doc(kind: str, m: np.ndarray, hbar: float, n: Optional[int] = None) -> dict:
    d = m.shape[0]
    return {"kind": kind, "n": n if n is not None else d // 2 if d % 2 == 0 else d, "hbar": hbar, "data": m.tolist()}


def _ellipsoid_doc(e: ell.Ellipsoid, n: int) -> dict:
    return _matrix_doc("ellipsoid_M", np.asarray(e.M), e.hbar, n)


# -- command handlers: each returns (verdict, payload) ------------------------


def _polar_dual(doc, args):
    e = doc.ellipsoid(args.tol)
    return True, _ellipsoid_doc(ell.polar_dual(e), doc.n)


def _sympl_dual(doc, args):
    return True, _ellipsoid_doc(ell.symplectic_polar_dual(doc.phase_ellipsoid(args.tol)), doc.n)


def _williamson(doc, args):
    m = doc.data if doc.kind in ("ellipsoid_M", "covariance_Sigma") else doc.ellipsoid(args.tol).M
    if m.shape[0] != 2 * doc.n:
        raise InputError("williamson needs a 2n x 2n matrix")
    s0, lam = williamson(m, Tolerances(recon=args.tol, symp=args.tol))
    recon = s0.T @ np.diag(np.concatenate([lam, lam])) @ s0
    return True, {
        "matrix": "Sigma" if doc.kind == "covariance_Sigma" else "M",
        "symplectic_eigenvalues": lam.tolist(),
        "S0": _matrix_doc("symplectic_S", s0, doc.hbar, doc.n),
        "reconstruction_residual": float(ell.matrix_gap(recon, m)),
    }


def _blob_check(doc, args):
    report = ell.is_blob(doc.phase_ellipsoid(args.tol), args.tol)
    payload = {
        "is_blob": report.is_blob,
        "symplectic_residual": report.symplectic,
        "cond0_residual": report.cond0_residual,
        "rs_residuals": list(report.rs_residuals),
    }
    if report.witness_S is not None:
        payload["witness_S"] = _matrix_doc("symplectic_S", report.witness_S, doc.hbar, doc.n)
    return report.is_blob, payload


def _quantized_check(doc, args):
    e = doc.phase_ellipsoid(args.tol)
    verdict = ell.is_quantized(e, args.tol)
    return verdict, {"is_quantized": verdict, "symplectic_eigenvalues": symplectic_eigenvalues(e.M).tolist()}


def _capacity(doc, args):
    result = capacity.capacity_ellipsoid(doc.phase_ellipsoid(args.tol))
    return True, {"value": result.value, "formula_used": result.formula_used}


def _cmax_product(doc, args):
    x = doc.config_ellipsoid()
    if args.other is None:
        p = ell.polar_dual(x)
    else:
        p = Document(_load(args.other), args.hbar).config_ellipsoid()
    result = capacity.cmax_product(x, p, args.tol)
    return True, {"value": result.value, "formula_used": result.formula_used}


def _project(doc, args):
    return True, _ellipsoid_doc(ell.project(doc.phase_ellipsoid(args.tol), args.plane), doc.n)


def _intersect(doc, args):
    return True, _ellipsoid_doc(ell.intersect(doc.phase_ellipsoid(args.tol), args.plane), doc.n)


def _john(doc, args):
    return True, _ellipsoid_doc(ell.john_of_product(doc.config_ellipsoid()), doc.n)


def _gaussian_wigner(doc, args):
    g = gs.wigner_matrix(doc.pure())
    return True, {
        "wigner_matrix": _matrix_doc("ellipsoid_M", g, doc.hbar, doc.n),
        "is_symplectic": is_symplectic(g, max(args.tol, 1e-12)),
        "det": float(np.linalg.det(g)),
        "peak": (math.pi * doc.hbar) ** (-doc.n),
    }


def _gaussian_purity(doc, args):
    mu = gs.purity(doc.mixed(), warn=False)
    return True, {"purity": mu, "physical": mu <= 1.0 + args.tol}


def _quantum_check(doc, args):
    v = gs.quantum_check(doc.mixed(), args.tol)
    return v.is_quantum, {
        "is_quantum": v.is_quantum,
        "min_hermitian_eig": v.min_hermitian_eig,
        "min_sympl_eig_of_sigma": v.min_sympl_eig_of_sigma,
        "purity": v.purity,
    }


def _tomography_check(doc, args):
    result = gs.tomography_pure_test(doc.mixed(), args.tol)
    return result.is_pure, {"is_pure": result.is_pure, "residuals": list(result.residuals)}


HANDLERS = {
    "polar-dual": _polar_dual,
    "sympl-dual": _sympl_dual,
    "williamson": _williamson,
    "blob-check": _blob_check,
    "quantized-check": _quantized_check,
    "capacity": _capacity,
    "cmax-product": _cmax_product,
    "project": _project,
    "intersect": _intersect,
    "john": _john,
    "gaussian-wigner": _gaussian_wigner,
    "gaussian-purity": _gaussian_purity,
    "quantum-check": _quantum_check,
    "tomography-check": _tomography_check,
}


def _load(path: str, stdin=None) -> Any:
    try:
        if path == "-":
            return json.load(stdin if stdin is not None else sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON: {exc}") from exc
    except OSError as exc:
        raise InputError(f"cannot read {path!r}: {exc.strerror}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sympolar", description="Polar duality, symplectic capacities and Gaussian states.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=TOL_RECON, help="relative tolerance (default %(default)g)")
    common.add_argument("--hbar", type=float, default=None, help="override the document's hbar")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in HANDLERS:
        cmd = sub.add_parser(name, parents=[common])
        cmd.add_argument("file", help="JSON matrix document, or - for stdin")
        if name == "cmax-product":
            cmd.add_argument("other", nargs="?", help="second configuration ellipsoid P (default: polar dual of X)")
        if name in ("project", "intersect"):
            cmd.add_argument("--plane", choices=["X", "P"], default="X", help="coordinate plane (default X)")
    ver = sub.add_parser("verify", parents=[common])
    ver.add_argument("suite", nargs="?", default="all", choices=list(vf.SUITES) + ["all"])
    ver.add_argument("--seed", type=int, default=0)
    ver.add_argument("--level", choices=sorted(vf.LEVELS), default="quick")
    return parser


def _error(kind: str, message: str) -> dict:
    return {"error": {"type": kind, "message": message}}


def run(argv, stdin=None) -> tuple[int, dict]:
    """Parse ``argv`` (without the program name), execute, and return ``(exit_code, result)``."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        if exc.code == 0:
            return EXIT_OK, {}
        return EXIT_INVALID, _error("usage", "invalid command line")
    if not args.tol > 0:
        return EXIT_INVALID, _error("usage", "--tol must be positive")

    if args.command == "verify":
        report = vf.run(args.suite, args.seed, args.level)
        return (EXIT_OK if report.all_passed else EXIT_NEGATIVE), report.as_dict()

    try:
        doc = Document(_load(args.file, stdin), args.hbar)
        verdict, payload = HANDLERS[args.command](doc, args)
    except (InputError, InvalidMatrixError, ell.HbarMismatchError, gs.NotABlobError) as exc:
        return EXIT_INVALID, _error(type(exc).__name__, str(exc))
    except NumericalError as exc:
        return EXIT_INTERNAL, _error(type(exc).__name__, str(exc))
    payload["tol"] = args.tol
    return (EXIT_OK if verdict else EXIT_NEGATIVE), payload


def main(argv=None) -> int:
    code, result = run(sys.argv[1:] if argv is None else argv)
    if "error" in result:
        print(f"sympolar: {result['error']['message']}", file=sys.stderr)
    if result:
        print(json.dumps(result, indent=2))
    return code


if __name__ == "__main__":
    sys.exit(main())
