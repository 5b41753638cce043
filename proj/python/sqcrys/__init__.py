"""Square-lattice crystallization toolkit."""

import json as _json

from . import _sqcrys
from ._sqcrys import (  # noqa: F401
    Potential,
    ParameterError,
    DomainError,
    PreconditionError,
    ConstructionError,
    Error,
    preset,
    hard_square,
    exv3,
    hermite_well,
    resum,
    total_energy,
    four_point_energy,
    lattice_energy_per_point,
    count_representations,
    m_of_r,
    f_map,
    d_tilde,
    embed,
    affine_distortion,
    perturbed_lattice,
    lattice_candidate,
)


def _decoded(fn):
    def wrapper(*args, **kwargs):
        return _json.loads(fn(*args, **kwargs))

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


check_conditions = _decoded(_sqcrys.check_conditions)
e4_spectrum = _decoded(_sqcrys.e4_spectrum)
optimal_scale = _decoded(_sqcrys.optimal_scale)
verify_cover = _decoded(_sqcrys.verify_cover)
bond_graph = _decoded(_sqcrys.bond_graph)
hard_minimize = _decoded(_sqcrys.hard_minimize)
multi_start = _decoded(_sqcrys.multi_start)
local_minimize = _decoded(_sqcrys.local_minimize)


def potential_from_json(spec):
    if not isinstance(spec, str):
        spec = _json.dumps(spec)
    return _sqcrys.potential_from_json(spec)
