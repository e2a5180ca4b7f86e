import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from sympolar.cli import KINDS, Document, run


def call(command, doc, *flags):
    stdin = io.StringIO(doc if isinstance(doc, str) else json.dumps(doc))
    return run([command, "-", *flags], stdin)


def ellipsoid_doc(m, n=None, hbar=1.0):
    m = np.asarray(m, dtype=float)
    return {"kind": "ellipsoid_M", "n": n or m.shape[0] // 2, "hbar": hbar, "data": m.tolist()}


def test_blob_check_ball():
    code, out = call("blob-check", ellipsoid_doc(np.eye(2)))
    assert code == 0 and out["is_blob"] is True and out["tol"] == 1e-9


def test_blob_check_negative_verdict():
    code, out = call("blob-check", ellipsoid_doc(np.diag([2.0, 2.0])))
    assert code == 1 and out["is_blob"] is False and "witness_S" not in out


def test_capacity():
    code, out = call("capacity", ellipsoid_doc(np.diag([2.0, 2.0])))
    assert code == 0 and out["value"] == pytest.approx(math.pi / 2, rel=1e-14)


def test_tomography_check_mixed():
    doc = {"kind": "covariance_Sigma", "n": 1, "hbar": 1.0, "data": [[1.0, 0.0], [0.0, 1.0]]}
    code, out = call("tomography-check", doc)
    assert code == 1 and out["is_pure"] is False


def test_quantum_check_and_purity():
    doc = {"kind": "covariance_Sigma", "n": 1, "data": [[0.25, 0.0], [0.0, 0.25]]}
    code, out = call("quantum-check", doc)
    assert code == 1 and out["is_quantum"] is False
    code, out = call("gaussian-purity", doc)
    assert code == 0 and out["purity"] == pytest.approx(2.0) and out["physical"] is False


def test_pure_gaussian_commands():
    doc = {"kind": "pure_gaussian", "n": 1, "X": [[1.0]], "Y": [[1.0]]}
    code, out = call("gaussian-wigner", doc)
    assert code == 0
    np.testing.assert_allclose(out["wigner_matrix"]["data"], [[2.0, 1.0], [1.0, 1.0]])
    assert out["is_symplectic"] and out["det"] == pytest.approx(1.0)
    assert call("tomography-check", doc)[0] == 0
    assert call("blob-check", doc)[0] == 0


def test_duals_round_trip_as_documents():
    m = [[2.0, 0.3], [0.3, 1.0]]
    code, out = call("sympl-dual", ellipsoid_doc(m))
    assert code == 0
    Document(out)
    code, back = call("sympl-dual", out)
    np.testing.assert_allclose(back["data"], m, rtol=1e-12)
    code, out = call("polar-dual", ellipsoid_doc([[4.0]], n=1))
    np.testing.assert_allclose(out["data"], [[0.25]])


def test_williamson():
    code, out = call("williamson", ellipsoid_doc(np.diag([2.0, 2.0])))
    assert code == 0 and out["symplectic_eigenvalues"] == pytest.approx([2.0])
    assert out["matrix"] == "M" and out["reconstruction_residual"] <= 1e-12
    Document(out["S0"])


def test_quantized_check():
    assert call("quantized-check", ellipsoid_doc(0.5 * np.eye(2)))[0] == 0
    code, out = call("quantized-check", ellipsoid_doc(2.0 * np.eye(2)))
    assert code == 1 and out["symplectic_eigenvalues"] == pytest.approx([2.0])


def test_projection_intersection_john():
    m = [[2.0, 1.0], [1.0, 1.0]]
    np.testing.assert_allclose(call("project", ellipsoid_doc(m))[1]["data"], [[1.0]])
    np.testing.assert_allclose(call("intersect", ellipsoid_doc(m), "--plane", "P")[1]["data"], [[1.0]])
    code, out = call("john", ellipsoid_doc([[2.0]], n=1))
    np.testing.assert_allclose(out["data"], np.diag([2.0, 0.5]))


def test_cmax_product(tmp_path):
    x = ellipsoid_doc(np.eye(2), n=2)
    assert call("cmax-product", x)[1]["value"] == pytest.approx(4.0)
    other = tmp_path / "p.json"
    other.write_text(json.dumps(ellipsoid_doc(np.eye(2) / 4, n=2)))
    assert call("cmax-product", x, str(other))[1]["value"] == pytest.approx(8.0)


def test_hbar_override():
    code, out = call("capacity", ellipsoid_doc(np.eye(2)), "--hbar", "2")
    assert out["value"] == pytest.approx(2 * math.pi)


def test_symplectic_document():
    doc = {"kind": "symplectic_S", "n": 1, "data": [[2.0, 0.0], [0.0, 0.5]]}
    code, out = call("blob-check", doc)
    assert code == 0
    assert call("blob-check", {**doc, "data": [[2.0, 0.0], [0.0, 2.0]]})[0] == 2


@pytest.mark.parametrize(
    "doc",
    [
        "not json",
        "[1, 2]",
        {"kind": "matrix", "n": 1, "data": [[1, 0], [0, 1]]},
        {"kind": "ellipsoid_M", "n": 0, "data": [[1]]},
        {"kind": "ellipsoid_M", "n": 1, "data": [[1, 2], [0, 1]]},
        {"kind": "ellipsoid_M", "n": 1, "data": [[1, 0], [0, -1]]},
        {"kind": "ellipsoid_M", "n": 2, "data": [[1, 0], [0, 1], [0, 0]]},
        {"kind": "ellipsoid_M", "n": 1, "hbar": -1, "data": [[1, 0], [0, 1]]},
        {"kind": "ellipsoid_M", "n": 1, "data": [["a", 0], [0, 1]]},
        {"kind": "pure_gaussian", "n": 1, "X": [[1.0]]},
    ],
)
def test_invalid_input_exits_2(doc):
    code, out = call("capacity", doc)
    assert code == 2 and set(out["error"]) == {"type", "message"}


def test_wrong_kind_for_command():
    assert call("tomography-check", ellipsoid_doc(np.eye(2)))[0] == 2
    assert call("john", ellipsoid_doc(np.eye(2)))[0] == 2
    assert call("sympl-dual", ellipsoid_doc([[1.0]], n=1))[0] == 2


def test_missing_file():
    code, out = run(["capacity", "/nonexistent/file.json"])
    assert code == 2


def test_usage_error():
    assert run(["frobnicate"])[0] == 2
    assert run(["capacity", "-", "--tol", "-1"], io.StringIO("{}"))[0] == 2


def test_kinds_listed():
    assert KINDS == ("ellipsoid_M", "covariance_Sigma", "pure_gaussian", "symplectic_S")


def test_verify_deterministic():
    first = run(["verify", "gaussian", "--seed", "7"])
    second = run(["verify", "gaussian", "--seed", "7"])
    assert first == second
    assert json.dumps(first[1]) == json.dumps(second[1])
    assert first[0] == 0 and first[1]["all_passed"]


def test_verify_capacity():
    code, out = run(["verify", "capacity", "--seed", "3"])
    assert code == 0 and set(out["results"]) == {"capacity-ellipsoid", "Eq-yaron3", "Eq-clinmax"}


def test_console_entry_point():
    doc = json.dumps(ellipsoid_doc(np.eye(2)))
    proc = subprocess.run(
        [sys.executable, "-m", "sympolar.cli", "blob-check", "-"], input=doc, capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["is_blob"] is True
    proc = subprocess.run([sys.executable, "-m", "sympolar.cli", "capacity", "-"], input="{", capture_output=True, text=True)
    assert proc.returncode == 2 and "malformed JSON" in proc.stderr
