import math

import numpy as np
import pytest

import hmbem


def test_cube_mesh():
    mesh = hmbem.cube_mesh(2)
    assert mesh["elements"].shape == (96, 4)
    assert mesh["centers"].shape == (96, 3)
    assert mesh["vertices"].shape == (98, 3)
    assert np.allclose(mesh["areas"], 1.0 / 16.0)
    assert math.isclose(mesh["areas"].sum(), 6.0, rel_tol=1e-12)


def test_eval_points():
    pts = hmbem.eval_points(5)
    assert pts.shape == (125, 3)
    assert pts.min() == 0.25 and pts.max() == 0.75
    assert np.array_equal(hmbem.eval_points(1), [[0.5, 0.5, 0.5]])


def test_morton_code():
    assert hmbem.morton_code([0.5, 0.0, 0.0]) == 1 << 62
    assert hmbem.morton_code([1.0, 1.0, 1.0]) == (1 << 63) - 1
    with pytest.raises(hmbem.DomainError):
        hmbem.morton_code([2.0, 0.0, 0.0])


def test_cluster_tree_and_blocks():
    centers = hmbem.cube_mesh(4)["centers"]
    tree = hmbem.cluster_tree(centers, 32)
    assert len(tree["leaves"]) == 64
    assert all(hi - lo == 24 for lo, hi in tree["leaves"])
    assert sorted(tree["perm"]) == list(range(1536))

    blocks = hmbem.block_tasks(centers, 1.0, 32)
    tasks = np.vstack([blocks["dense"], blocks["admissible"]])
    area = (tasks[:, 1] - tasks[:, 0]) * (tasks[:, 3] - tasks[:, 2])
    assert area.sum() == 1536 * 1536
    assert blocks["digest"] == hmbem.block_tasks(centers, 1.0, 32)["digest"]


def test_aca_rank_one_and_kernel_block():
    a = np.array([1.0, -2.0, 3.0, 0.5])
    b = np.array([2.0, 1.0, -1.0])
    U, V = hmbem.aca(np.outer(a, b), 3)
    assert U.shape[1] == 1
    assert np.allclose(U @ V.T, np.outer(a, b), rtol=0, atol=1e-14)

    rng = np.random.default_rng(0)
    x = rng.random((8, 3))
    y = rng.random((8, 3)) + [4.0, 0.0, 0.0]
    A = 1.0 / np.linalg.norm(x[:, None, :] - y[None, :, :], axis=2)
    U, V = hmbem.aca(A, 8)
    assert np.linalg.norm(U @ V.T - A) <= 1e-10 * np.linalg.norm(A)


def test_lpt_assign():
    assign, load = hmbem.lpt_assign([10, 9, 2, 1], 2)
    assert assign == [0, 1, 1, 0]
    assert load == [11, 11]


def test_hmatrix_against_dense():
    A = hmbem.galerkin_matrix(3)
    assert np.array_equal(A, A.T)
    np.linalg.cholesky(A)
    H = hmbem.assemble_cube(3, k_max=16, threads=2)
    x = np.random.default_rng(1).standard_normal(H.n)
    assert np.linalg.norm(H.matvec(x) - A @ x) <= 1e-6 * np.linalg.norm(A @ x)
    stats = H.stats()
    assert stats["dense_entries"] + stats["lowrank_entries"] > 0
    with pytest.raises(hmbem.DimensionError):
        H.matvec(np.ones(H.n - 1))


def test_cg_with_python_operator():
    d = np.arange(1.0, 11.0)
    res = hmbem.cg_solve(lambda v: d * v, np.ones(10), tol=1e-12)
    assert res["converged"] and res["iters"] <= 10
    assert np.allclose(res["alpha"], 1.0 / d, rtol=1e-10)
    with pytest.raises(hmbem.BreakdownError):
        hmbem.cg_solve(lambda v: -v, np.ones(3))


def test_solve_cube_pipeline():
    coarse = hmbem.solve_cube(2, k_max=16)
    fine = hmbem.solve_cube(3, k_max=16, workers=2)
    assert coarse["converged"] and fine["converged"]
    assert fine["error"] < coarse["error"]
    assert coarse["alpha"].shape == (96,)
    rate = hmbem.fitted_rate([coarse["n"], fine["n"]], [coarse["error"], fine["error"]])
    assert rate > 1.0
