"""Smoke test for the pykosh extension.

Uses an installed `pykosh` if there is one, otherwise the library built by
`cargo build --release -p koshliakov-py --features extension-module`.
"""

import importlib.machinery
import importlib.util
import math
import pathlib
import sys


def load():
    try:
        import pykosh

        return pykosh
    except ImportError:
        pass
    root = pathlib.Path(__file__).resolve().parents[1]
    for name in ("libpykosh.so", "libpykosh.dylib", "pykosh.dll"):
        path = root / "target" / "release" / name
        if path.exists():
            loader = importlib.machinery.ExtensionFileLoader("pykosh", str(path))
            spec = importlib.util.spec_from_file_location("pykosh", path, loader=loader)
            module = importlib.util.module_from_spec(spec)
            loader.exec_module(module)
            return module
    sys.exit("pykosh not found: build it with maturin or cargo first")


def main():
    k = load()

    roots = k.eigen_table(1.0, 5)
    assert len(roots) == 5
    assert all(n - 0.5 < lam < n for n, lam, _ in roots)
    assert abs(k.solve_lambda(1e8, 1) - 1.0) < 1e-7
    assert abs(k.weight(1.0, 0.0) - 1.0 / (1.0 + 1.0 / math.pi)) < 1e-15

    z = complex(0.7, 0.4)
    assert abs(k.kernel_k(1.0, z) - k.kernel_k_partial_fraction(1.0, z)) < 1e-7

    eta, err = k.eta_p(2.0, 1.0)
    assert abs(eta - 0.9253151207078442) < 1e-9 and err < 1e-9
    series, _ = k.eta_p(2.0, 1.0, method="series")
    assert abs(series - eta) < 1e-8
    assert abs(k.zeta_p_odd_negative(1, 1e8)[0] - 1.0 / 120.0) < 1e-6

    r = k.verify("theorem4", p=1.0, function="exp:a=1")
    assert r["pass"] and r["formula_id"] == "theorem4", r
    r = k.verify("entry_ab", n=3.0, alpha=math.pi, beta=4 * math.pi)
    assert r["pass"], r
    try:
        k.verify("theorem4", p=-1.0, function="exp:a=1")
    except ValueError:
        pass
    else:
        raise AssertionError("negative p accepted")

    reports = k.campaign('formulas = ["entry6", "koshalt"]\np_grid = [1.0]\nfunctions = ["exp:a=1"]\n'
                         '[tolerances]\natol = 1e-5\nrtol = 1e-5\n')
    assert [r["formula_id"] for r in reports] == ["entry6", "koshalt"]
    assert all(r["pass"] for r in reports)

    print("pykosh smoke test passed")


if __name__ == "__main__":
    main()
