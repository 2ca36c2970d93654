import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from framepot.constructions import half_circle, onb_copies, simplex
from framepot.core import (
    Configuration,
    ConfigurationError,
    canonical_invariant,
    frame_operator,
    gram,
    invariant_digest,
    invariants_match,
    is_frame,
    lift_coordinates,
    lift_projective,
    projective_circle,
)

from .conftest import random_config, random_orthogonal


def test_rows_are_renormalized_within_tolerance():
    c = Configuration([[1.0 + 5e-7, 0.0], [0.0, 1.0]])
    assert_allclose(np.linalg.norm(c.vectors, axis=1), 1.0, atol=1e-15)


@pytest.mark.parametrize(
    "bad",
    [
        [[2.0, 0.0], [0.0, 1.0]],
        [[0.0, 0.0], [0.0, 1.0]],
        [[np.nan, 1.0], [0.0, 1.0]],
        [[1.0, 0.0]],
        [[1.0], [1.0]],
    ],
)
def test_invalid_vectors_rejected(bad):
    with pytest.raises(ConfigurationError):
        Configuration(bad)


def test_vectors_are_read_only():
    c = half_circle(3)
    with pytest.raises(ValueError):
        c.vectors[0, 0] = 5.0


def test_gram_has_unit_diagonal_and_is_symmetric(rng):
    g = gram(random_config(rng, 7, 4))
    assert_allclose(np.diag(g), 1.0, atol=1e-12)
    assert_allclose(g, g.T, atol=0)
    assert np.all(np.abs(g) <= 1 + 1e-12)


def test_lift_identities(rng):
    c = random_config(rng, 6, 3)
    lifted = lift_projective(c)
    flat = lifted.reshape(6, -1)
    g = gram(c)
    assert_allclose(flat @ flat.T, g**2, atol=1e-12)
    d2 = np.sum((flat[:, None, :] - flat[None, :, :]) ** 2, axis=-1)
    assert_allclose(d2, 2 - 2 * g**2, atol=1e-12)
    assert_allclose(np.trace(lifted, axis1=1, axis2=2), 1.0, atol=1e-12)


def test_planar_lift_lies_on_circle(rng):
    c = random_config(rng, 9, 2)
    y = lift_coordinates(c)
    assert_allclose(np.linalg.norm(y - [0.5, 0, 0.5], axis=1), 1 / np.sqrt(2), atol=1e-12)
    u = gram(projective_circle(c))
    assert_allclose(u, 2 * gram(c) ** 2 - 1, atol=1e-12)


def test_frame_operator_trace_and_tightness(rng):
    c = random_config(rng, 11, 3)
    assert abs(np.trace(frame_operator(c)) - 11) < 1e-10
    assert_allclose(frame_operator(simplex(3)), (4 / 3) * np.eye(3), atol=1e-12)


def test_is_frame():
    assert is_frame(half_circle(3))
    assert not is_frame(Configuration([[1.0, 0.0], [1.0, 0.0], [-1.0, 0.0]]))


def test_invariant_examples():
    c = half_circle(4)
    assert_allclose(canonical_invariant(c.transformed(signs=-np.ones(4))), canonical_invariant(c), atol=0)
    rot = np.array([[np.cos(0.3), -np.sin(0.3)], [np.sin(0.3), np.cos(0.3)]])
    assert invariants_match(c.transformed(orthogonal=rot), c, tol=1e-12)
    assert not invariants_match(c, onb_copies(2, 2))


@settings(max_examples=40, deadline=None)
@given(n=st.integers(2, 9), d=st.integers(2, 5), seed=st.integers(0, 2**32 - 1))
def test_invariant_under_group_actions(n, d, seed):
    rng = np.random.default_rng(seed)
    c = random_config(rng, n, d)
    moved = c.transformed(
        orthogonal=random_orthogonal(rng, d), perm=rng.permutation(n), signs=rng.choice([-1.0, 1.0], n)
    )
    assert_allclose(canonical_invariant(moved), canonical_invariant(c), atol=1e-10)
    assert invariant_digest(c.transformed(signs=-np.ones(n))) == invariant_digest(c)


def test_json_round_trip(tmp_path, rng):
    c = random_config(rng, 5, 3)
    path = tmp_path / "c.json"
    c.save(path)
    back = Configuration.load(path)
    assert np.array_equal(back.vectors, c.vectors)
    data = json.loads(path.read_text())
    assert data["n"] == 5 and data["dim"] == 3


def test_from_dict_checks_shape():
    with pytest.raises(ConfigurationError):
        Configuration.from_dict({"dim": 3, "n": 1, "vectors": [[1.0, 0.0]]})
