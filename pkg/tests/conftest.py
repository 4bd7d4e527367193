import json
import math

import numpy as np
import pytest

from balayage import AtomicCharge, RaySystem


def random_charge(rng, n_atoms, r_lo=0.2, r_hi=50.0, positive=False,
                  upper_only=False):
    atoms = []
    for _ in range(n_atoms):
        r = math.exp(rng.uniform(math.log(r_lo), math.log(r_hi)))
        th = rng.uniform(0.0, math.pi if upper_only else 2.0 * math.pi)
        if upper_only and th in (0.0, math.pi):
            th = math.pi / 2.0
        m = rng.uniform(0.05, 2.0)
        if not positive and rng.random() < 0.4:
            m = -m
        atoms.append((r * complex(math.cos(th), math.sin(th)), m))
    return AtomicCharge(atoms)


def write_json(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


@pytest.fixture
def charge_file(tmp_path):
    def make(atoms, name="charge.json"):
        obj = {"atoms": [{"re": z.real, "im": z.imag, "mass": m}
                         for z, m in atoms]}
        return write_json(tmp_path / name, obj)
    return make


@pytest.fixture
def system_file(tmp_path):
    def make(thetas, name="system.json"):
        return write_json(tmp_path / name, {"rays": list(thetas)})
    return make
