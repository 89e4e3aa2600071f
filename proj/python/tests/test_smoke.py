# Copyright 2026 The gbsopt Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import itertools
import json
import math

import numpy as np
import pytest

import gbsopt


def brute_hafnian(a):
    n = a.shape[0]
    if n % 2:
        return 0
    if n == 0:
        return 1
    total = 0
    for j in range(1, n):
        rest = [i for i in range(1, n) if i != j]
        total += a[0, j] * brute_hafnian(a[np.ix_(rest, rest)])
    return total


def test_hafnian_of_complete_graph():
    for m in range(1, 5):
        a = np.ones((2 * m, 2 * m)) - np.eye(2 * m)
        assert gbsopt.hafnian(a) == complex(gbsopt.double_factorial(2 * m - 1))


def test_hafnian_matches_python_reference():
    rng = np.random.default_rng(5)
    x = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    x = x + x.T
    assert abs(gbsopt.hafnian(x) - brute_hafnian(x)) < 1e-10 * abs(brute_hafnian(x))
    assert abs(gbsopt.hafnian_definition(x) - gbsopt.hafnian(x)) < 1e-10 * abs(gbsopt.hafnian(x))


def test_coe_matrix_is_symmetric_and_seeded():
    b = gbsopt.coe_matrix(8, 1.0, 3)
    assert np.array_equal(b, b.T)
    assert np.array_equal(b, gbsopt.coe_matrix(8, 1.0, 3))
    s = np.linalg.svd(b, compute_uv=False)
    assert np.allclose(s, math.tanh(1.0))


def test_conditional_distribution_is_normalized():
    b = gbsopt.coe_matrix(8, 1.0, 11)
    patterns, probs = gbsopt.conditional_distribution(b, 4, 1.0)
    assert len(patterns) == math.comb(8, 4)
    assert patterns == sorted(patterns)
    assert abs(sum(probs) - 1.0) < 1e-12
    pattern, value = gbsopt.max_haf(b, 4)
    assert patterns[int(np.argmax(probs))] == pattern
    idx = [i for i, c in enumerate(pattern) if c == "1"]
    assert abs(abs(brute_hafnian(b[np.ix_(idx, idx)])) - value) < 1e-12


def test_max_even_clique():
    a = np.zeros((6, 6))
    for i, j in itertools.combinations(range(4), 2):
        a[i, j] = a[j, i] = 1
    assert gbsopt.max_even_clique(a) == 4
    assert gbsopt.max_even_clique(np.zeros((5, 5))) == 0


def test_theory_functions():
    assert gbsopt.expected_max_uniform(9) == 0.9
    assert abs(gbsopt.expected_max_proportional(1.0, 1) - (1 / (1 - math.exp(-1)) - 1)) < 1e-14
    assert gbsopt.analytic_ratio_R(4, 2) == pytest.approx(1.5, rel=1e-14)


def test_run_experiment_is_deterministic():
    cfg = json.dumps({"n": 12, "k": 4, "algorithm": "random-search", "sampler": "uniform",
                      "budget": 50, "repetitions": 20, "seed": 7})
    a = gbsopt.run_experiment(cfg)
    b = gbsopt.run_experiment(cfg)
    assert a["csv"] == b["csv"]
    assert a["columns"] == ["evaluations", "mean", "std", "stderr"]
    assert len(a["rows"]) == 50
    means = [row[1] for row in a["rows"]]
    assert all(x <= y for x, y in zip(means, means[1:]))


def test_unknown_config_key_is_rejected():
    with pytest.raises(ValueError):
        gbsopt.run_experiment(json.dumps({"n": 12, "bogus": 1}))
