"""Certified constructions around the Caratheodory metric of unit balls.

Thin dict-friendly wrappers over the native module: compound inputs and
outputs cross the boundary as JSON.
"""

import json as _json

from ._core import (  # noqa: F401
    DimensionError,
    DomainError,
    InvalidInput,
    LinearityViolation,
    NotAnIsometry,
    NumericalFailure,
    RankDeficient,
    VanishingViolation,
    VerificationFailure,
    WrongNormKind,
    __version__,
    carath_supball,
)
from . import _core


def _dumps(obj):
    return obj if isinstance(obj, str) else _json.dumps(obj)


def map_eval(map_expr, x):
    return _core.map_eval(_dumps(map_expr), x)


def map_jacobian(map_expr, x):
    return _core.map_jacobian(_dumps(map_expr), x)


def norm_eval(norm, x):
    return _core.norm_eval(_dumps(norm), x)


def dual_norm_eval(norm, g, tol=1e-6):
    return _core.dual_norm_eval(_dumps(norm), g, tol)


def unit_sphere_sample(norm, count, seed=1):
    return _core.unit_sphere_sample(_dumps(norm), count, seed)


def operator_norm(A, from_norm, to_norm, tol=1e-6):
    return _json.loads(_core.operator_norm(A, _dumps(from_norm), _dumps(to_norm), tol))


def taylor_coeff(map_expr, alpha, radius=0.5):
    return _core.taylor_coeff(_dumps(map_expr), alpha, radius)


def carath_origin(norm, v):
    return _core.carath_origin(_dumps(norm), v)


def isometry_check(A, from_norm, to_norm, samples=512, seed=1, tol=1e-6):
    return _json.loads(
        _core.isometry_check(A, _dumps(from_norm), _dumps(to_norm), samples, seed, tol)
    )


def schwarz_pick_check(f, from_norm, to_norm, samples=200, seed=1):
    return _json.loads(
        _core.schwarz_pick_check(_dumps(f), _dumps(from_norm), _dumps(to_norm), samples, seed)
    )


def min_norm_extension(basis, values, norm, tol=1e-6, budget=100000):
    return _json.loads(_core.min_norm_extension(basis, values, _dumps(norm), tol, budget))


def project_hilbert(L, target_norm):
    return _json.loads(_core.project_hilbert(L, _dumps(target_norm)))


def property_v_supsource(L, target_norm, tol=1e-6, budget=100000):
    return _json.loads(_core.property_v_supsource(L, _dumps(target_norm), tol, budget))


def support_index_certificate(L):
    return _json.loads(_core.support_index_certificate(L))


def property_v_c0(L):
    return _json.loads(_core.property_v_c0(L))


def min_projection_norm(L, target_norm, tol=1e-6, budget=100000):
    return _json.loads(_core.min_projection_norm(L, _dumps(target_norm), tol, budget))


def counterexample_obstruction(tol=1e-6, budget=200000):
    return _json.loads(_core.counterexample_obstruction(tol, budget))


def verify_linearity(f, pi, max_order=4, radius=0.5):
    return _json.loads(_core.verify_linearity(_dumps(f), pi, max_order, radius))


def run_scenario(command, problem=None, method="auto", **options):
    problem_json = "" if problem is None else _dumps(problem)
    code, report = _core.run_scenario(command, problem_json, method, **options)
    return code, _json.loads(report)
