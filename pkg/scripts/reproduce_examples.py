"""Print the named examples: the gauged counterexample, K_{3,2} and the M_r family."""

import math

import numpy as np

from nspaces import catalog
from nspaces.birkhoff import distortion_distance, distortion_objective
from nspaces.euclidean import negative_type_sqrt_consistency
from nspaces.spectral import is_negative_type


def gauged() -> None:
    print("gauged pair f = 1[i != j], g = -f")
    print(f"{'n':>3} {'quotient':>12} {'uniform':>12} {'FW estimate':>12} {'certificate':>20}")
    for n in range(2, 9):
        ex = catalog.gauged_counterexample(n)
        rep = distortion_distance(ex.f, ex.g, seed=n)
        uniform = math.sqrt(distortion_objective(ex.f, ex.g, np.full((n, n), 1 / n)))
        print(f"{n:>3} {rep.d_quotient:12.9f} {uniform:12.9f} {rep.delta_estimate:12.9f} "
              f"{rep.certificate.value:>20}")


def k32() -> None:
    D, eta = catalog.k32_space()
    ok, spec = is_negative_type(D)
    print("\nK_{3,2}")
    print(f"  eta^T D eta = {eta @ D @ eta:g} for eta = {eta.tolist()}")
    print(f"  negative type: {ok}; conditional spectrum {np.round(spec.eigenvalues, 6).tolist()}")
    link = negative_type_sqrt_consistency(D)
    print(f"  sqrt-transform Euclidean: {link.sqrt_euclidean}")


def mr() -> None:
    print("\nM_r family")
    for r in range(5, 11):
        ok, spec = is_negative_type(catalog.mr_space(r))
        print(f"  r={r:>2}: negative type {ok}, max conditional eigenvalue {spec.max_eig:.6f}")


if __name__ == "__main__":
    gauged()
    k32()
    mr()
