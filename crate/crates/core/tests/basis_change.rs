use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha20Rng;
use slater_mps::basis_change::{build_grid, inverse_transform, sector_contract, theta_state, transform_tensor};
use slater_mps::tensor::{matmul, ComplexMatrix, ComplexVector, C64};
use slater_mps::{build_slater_mps, determinant_oracle, jw_dense_creation, Occupation, OrbitalSet, Statistics};

/// Column `q` is `c̃_1^{†q_1} ⋯ c̃_L^{†q_L}|Ω⟩`, built from dense Jordan-Wigner operators.
fn dense_change_of_basis(basis: &OrbitalSet) -> ComplexMatrix {
    let l = basis.n_sites();
    let dim = 1 << l;
    let ops: Vec<ComplexMatrix> =
        (0..l).map(|a| jw_dense_creation(basis.orbital(a), l, Statistics::Fermion).unwrap()).collect();
    let mut out = ComplexMatrix::zeros(dim, dim);
    for q in 0..dim {
        let occ = Occupation::from_index(q, l);
        let mut state = ComplexVector::basis(dim, 0);
        for a in (0..l).rev().filter(|&a| occ.bits()[a] == 1) {
            state = ops[a].matvec(&state).unwrap();
        }
        for s in 0..dim {
            out[(s, q)] = state[s];
        }
    }
    out
}

fn grid_matrix(basis: &OrbitalSet) -> ComplexMatrix {
    let l = basis.n_sites();
    let grid = build_grid(basis).unwrap();
    let mut out = ComplexMatrix::zeros(1 << l, 1 << l);
    for q in 0..1 << l {
        let col = theta_state(&grid, &Occupation::from_index(q, l)).unwrap();
        for s in 0..1 << l {
            out[(s, q)] = col[s];
        }
    }
    out
}

fn random_vector(dim: usize, seed: u64) -> ComplexVector {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    (0..dim).map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect::<Vec<_>>().into()
}

#[test]
fn grid_matches_dense_oracle() {
    for (l, seed) in [(1, 0), (2, 1), (3, 2), (4, 3), (5, 4)] {
        let basis = OrbitalSet::random_orthonormal(l, l, seed).unwrap();
        let diff = grid_matrix(&basis).max_abs_diff(&dense_change_of_basis(&basis));
        assert!(diff < 1e-12, "L = {l}: {diff:e}");
    }
}

#[test]
fn single_creation_matches_jordan_wigner() {
    let basis = OrbitalSet::random_orthonormal(3, 3, 17).unwrap();
    let grid = build_grid(&basis).unwrap();
    let out = theta_state(&grid, &"100".parse().unwrap()).unwrap();
    let expected = jw_dense_creation(basis.orbital(0), 3, Statistics::Fermion)
        .unwrap()
        .matvec(&ComplexVector::basis(8, 0))
        .unwrap();
    assert!(out.max_abs_diff(&expected) < 1e-14);
}

#[test]
fn change_of_basis_is_unitary_and_conserves_particles() {
    for l in 1..=6 {
        let basis = OrbitalSet::random_orthonormal(l, l, 100 + l as u64).unwrap();
        let u = grid_matrix(&basis);
        let gram = matmul(&u.adjoint(), &u).unwrap();
        assert!(gram.max_abs_diff(&ComplexMatrix::identity(1 << l)) < 1e-10);
        for s in 0..1 << l {
            for q in 0..1 << l {
                if (s as u32).count_ones() != (q as u32).count_ones() {
                    assert!(u[(s, q)].norm() < 1e-14);
                }
            }
        }
    }
}

#[test]
fn theta_states_are_normalized_and_sharp() {
    let l = 5;
    let grid = build_grid(&OrbitalSet::random_orthonormal(l, l, 8).unwrap()).unwrap();
    for q in 0..1 << l {
        let occ = Occupation::from_index(q, l);
        let state = theta_state(&grid, &occ).unwrap();
        assert!((state.norm() - 1.0).abs() < 1e-12);
        for (s, z) in state.entries().iter().enumerate() {
            if Occupation::from_index(s, l).popcount() != occ.popcount() {
                assert_eq!(z.norm(), 0.0);
            }
        }
    }
}

#[test]
fn transform_matches_dense_map_and_preserves_norm() {
    let l = 4;
    let basis = OrbitalSet::random_orthonormal(l, l, 23).unwrap();
    let grid = build_grid(&basis).unwrap();
    let t_new = random_vector(1 << l, 5);
    let t_old = transform_tensor(&grid, &t_new).unwrap();
    let expected = dense_change_of_basis(&basis).matvec(&t_new).unwrap();
    assert!(t_old.max_abs_diff(&expected) < 1e-11);
    assert!((t_old.norm() - t_new.norm()).abs() < 1e-11);
    let back = inverse_transform(&grid, &t_old).unwrap();
    assert!(back.max_abs_diff(&t_new) < 1e-11);
}

#[test]
fn inverse_matches_adjoint_of_dense_map() {
    let basis = OrbitalSet::random_orthonormal(4, 4, 61).unwrap();
    let grid = build_grid(&basis).unwrap();
    let t_old = random_vector(16, 9);
    let expected = dense_change_of_basis(&basis).adjoint().matvec(&t_old).unwrap();
    assert!(inverse_transform(&grid, &t_old).unwrap().max_abs_diff(&expected) < 1e-11);
}

#[test]
fn single_determinant_matches_selected_rows() {
    let l = 6;
    let basis = OrbitalSet::random_orthonormal(l, l, 31).unwrap();
    let grid = build_grid(&basis).unwrap();
    let q: Occupation = "010110".parse().unwrap();
    let t_old = transform_tensor(&grid, &ComplexVector::basis(1 << l, q.index())).unwrap();
    let subset = basis.select(&q.occupied_sites()).unwrap();
    let mps = build_slater_mps(&subset, Statistics::Fermion).unwrap();
    for s in 0..1 << l {
        let occ = Occupation::from_index(s, l);
        assert!((t_old[s] - determinant_oracle(&subset, &occ).unwrap()).norm() < 1e-12);
        assert!((t_old[s] - mps.amplitude(&occ).unwrap()).norm() < 1e-12);
    }
}

#[test]
fn composition_of_basis_changes() {
    let l = 5;
    let v = OrbitalSet::random_orthonormal(l, l, 3).unwrap();
    let phi = OrbitalSet::random_orthonormal(l, l, 4).unwrap();
    // composed basis rows: (VΦ)_α = Σ_β V_αβ Φ_β
    let composed = OrbitalSet::from_matrix(matmul(v.matrix(), phi.matrix()).unwrap()).unwrap();
    let t = random_vector(1 << l, 12);
    let once = transform_tensor(&build_grid(&composed).unwrap(), &t).unwrap();
    let inner = transform_tensor(&build_grid(&v).unwrap(), &t).unwrap();
    let twice = transform_tensor(&build_grid(&phi).unwrap(), &inner).unwrap();
    assert!(once.max_abs_diff(&twice) < 1e-10);
}

#[test]
fn pruned_contraction_agrees_and_does_less_work() {
    let l = 6;
    for draw in 0..50u64 {
        let grid = build_grid(&OrbitalSet::random_orthonormal(l, l, 1000 + draw).unwrap()).unwrap();
        let q = Occupation::from_index(((draw * 37) % 64) as usize, l);
        let (full, full_stats) = grid.theta_state_counted(&q).unwrap();
        let (pruned, pruned_stats) = grid.sector_contract_counted(&q).unwrap();
        assert!(full.max_abs_diff(&pruned) < 1e-12);
        assert!(sector_contract(&grid, &q).unwrap().max_abs_diff(&full) < 1e-12);
        if q.popcount() < l {
            assert!(pruned_stats.coefficients_visited < full_stats.coefficients_visited);
        } else {
            assert_eq!(pruned_stats, full_stats);
        }
    }
}
