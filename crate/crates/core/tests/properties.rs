mod common;

use common::{min_eig, norm2, pinv as oracle_pinv, sqrt_psd};
use posfact_core::calculus::{
    borel_calculus, geometric_mean, local_spectral_subspace, mp_inverse_l2p, pedersen_takesaki,
    riesz_decomposition, sqrt_l2p,
};
use posfact_core::corpus::Corpus;
use posfact_core::dilation::{dilate_pos_proj, dilate_proj_proj};
use posfact_core::factorization::{
    cone_minimal, cone_sample, invertible_factor_pair, m_decomposition, schur_complement,
    sebestyen_solve,
};
use posfact_core::lab::{
    compact_factor_truncation, gallery, qs_not_sim_truncation, sqrtless_truncation, GalleryName,
    GalleryParams, Schedule,
};
use posfact_core::linalg::{
    douglas_solve, eig_general, pinv, psd_sqrt, range_kernel, real_diag, real_matrix, subspace_ops,
};
use posfact_core::membership::proj_proj_residual;
use posfact_core::{
    classify_subclass, is_l2p, optimal_pair, CMatrix, Subclass, Tolerances, C64, TOL_ANGLE,
};
use proptest::prelude::*;

fn tol() -> Tolerances {
    Tolerances::default()
}

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn member(seed: u64, n: usize) -> CMatrix {
    Corpus::new(seed).member(n, 100.0).t
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn psd_sqrt_squares_back(seed: u64, n in 1usize..=12) {
        let mut corpus = Corpus::new(seed);
        let p = corpus.psd_any_rank(n);
        let r = psd_sqrt(&p, &tol()).unwrap();
        prop_assert!(norm2(&(&r * &r - &p)) <= tol().tol_eq * norm2(&p));
    }

    #[test]
    fn subspace_dimensions_add_up(seed: u64, n in 1usize..=8, k in 0usize..=8, l in 0usize..=8) {
        let mut corpus = Corpus::new(seed);
        let (k, l) = (k.min(n), l.min(n));
        let u = corpus.subspace(n, k);
        // Share a random number of directions so intersections are nontrivial.
        let shared = corpus.dim(0, k.min(l));
        let mut v = corpus.subspace(n, l);
        v.basis.columns_mut(0, shared).copy_from(&u.basis.columns(0, shared));
        let v = posfact_core::Subspace::span(&v.basis, &tol());
        let ops = subspace_ops(&u, &v, &tol()).unwrap();
        prop_assert_eq!(ops.intersection.dim() + ops.sum.dim(), u.dim() + v.dim());
    }

    #[test]
    fn products_of_positives_are_members(seed: u64, n in 1usize..=8) {
        let tol = tol();
        let (a, b, t) = Corpus::new(seed).product(n);
        let verdict = is_l2p(&t, &tol).unwrap();
        prop_assert!(verdict.in_l2p, "{}", verdict.reason);
        let mut spectrum: Vec<C64> = eig_general(&t, &tol).unwrap().clusters.iter()
            .flat_map(|cl| std::iter::repeat(cl.eigenvalue).take(cl.algebraic_mult))
            .collect();
        let root = sqrt_psd(&a);
        let mut sym: Vec<f64> = (&root * &b * &root).symmetric_eigenvalues().iter().copied().collect();
        spectrum.sort_by(|x, y| x.re.total_cmp(&y.re));
        sym.sort_by(f64::total_cmp);
        for (z, s) in spectrum.iter().zip(&sym) {
            prop_assert!(z.im.abs() <= 1e-8 && z.re >= -1e-8);
            prop_assert!((z.re - s).abs() <= 1e-7);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn pinv_is_an_involution(seed: u64, rows in 1usize..=6, cols in 1usize..=6) {
        let mut corpus = Corpus::new(seed);
        let rank = corpus.dim(0, rows.min(cols));
        let m = corpus.gaussian(rows, rank) * corpus.gaussian(rank, cols);
        let back = pinv(&pinv(&m, &tol()), &tol());
        prop_assert!(norm2(&(&back - &m)) <= tol().tol_eq * norm2(&m).max(1.0));
    }

    #[test]
    fn range_and_co_range_have_equal_dimension(seed: u64, rows in 1usize..=7, cols in 1usize..=7) {
        let mut corpus = Corpus::new(seed);
        let rank = corpus.dim(0, rows.min(cols));
        let m = corpus.gaussian(rows, rank) * corpus.gaussian(rank, cols);
        prop_assert_eq!(range_kernel(&m, &tol()).0.dim(), range_kernel(&m.adjoint(), &tol()).0.dim());
    }

    #[test]
    fn douglas_solution_is_minimal(seed: u64, n in 1usize..=6, extra in 1usize..=3) {
        let tol = tol();
        let mut corpus = Corpus::new(seed);
        let rank = corpus.dim(1, n);
        let a = corpus.gaussian(n, rank) * corpus.gaussian(rank, n);
        let t = &a * corpus.gaussian(n, extra);
        let x = douglas_solve(&a, &t, &tol).unwrap();
        prop_assert!(norm2(&(&a * &x - &t)) <= tol.tol_eq * (norm2(&a) + norm2(&t)));
        let ker = range_kernel(&a, &tol).1;
        if ker.dim() > 0 {
            let k = &ker.basis * corpus.gaussian(ker.dim(), extra);
            prop_assert!((&x + k).norm() >= x.norm() * (1.0 - 1e-12));
        }
    }

    #[test]
    fn membership_survives_adjoint_and_similarity(seed: u64, n in 1usize..=6) {
        let tol = tol();
        let mut corpus = Corpus::new(seed);
        let t = if corpus.uniform(0.0, 1.0) < 0.5 {
            corpus.member(n, 10.0).t
        } else {
            corpus.gaussian(n, n)
        };
        let g = corpus.conditioned(n, 10.0);
        let similar = &g * &t * g.clone().try_inverse().unwrap();
        let base = is_l2p(&t, &tol).unwrap().in_l2p;
        prop_assert_eq!(is_l2p(&t.adjoint(), &tol).unwrap().in_l2p, base);
        prop_assert_eq!(is_l2p(&similar, &tol).unwrap().in_l2p, base);
    }

    #[test]
    fn members_meet_their_kernel_trivially(seed: u64, n in 1usize..=8) {
        let tol = tol();
        let t = member(seed, n);
        let (ran, ker) = range_kernel(&t, &tol);
        prop_assert_eq!(subspace_ops(&ran, &ker, &tol).unwrap().intersection.dim(), 0);
    }

    #[test]
    fn projection_products_are_classified(seed: u64, n in 1usize..=6) {
        let tol = tol();
        let mut corpus = Corpus::new(seed);
        let p = corpus.projection(n);
        let q = corpus.projection(n);
        prop_assert_eq!(classify_subclass(&(&p * &q), &tol).unwrap().subclass, Subclass::ProjProj);
        let a = corpus.psd_any_rank(n);
        let sub = classify_subclass(&(&a * &p), &tol).unwrap().subclass;
        prop_assert!(matches!(sub, Subclass::ProjProj | Subclass::PosProj), "{sub:?}");
    }

    #[test]
    fn optimal_pairs_certify(seed: u64, n in 1usize..=10) {
        let tol = tol();
        let t = Corpus::new(seed).member(n, 1e3).t;
        let pair = optimal_pair(&t, &tol).unwrap();
        prop_assert!(pair.residual <= tol.tol_eq * norm2(&t).max(f64::MIN_POSITIVE));
        prop_assert!(pair.range_match <= TOL_ANGLE && pair.kernel_match <= TOL_ANGLE);
    }

    #[test]
    fn sebestyen_solution_is_certified(seed: u64, n in 1usize..=8) {
        let tol = tol();
        let t = member(seed, n);
        let pair = optimal_pair(&t, &tol).unwrap();
        let s = sebestyen_solve(&pair.a, &t, &tol).unwrap();
        prop_assert!(s.residual <= tol.tol_eq * s.scale.max(f64::MIN_POSITIVE));
        prop_assert!(s.kernel_angle <= TOL_ANGLE);
        prop_assert!(s.schur_norm <= tol.tol_eq * norm2(&s.x).max(f64::MIN_POSITIVE));
    }

    #[test]
    fn cone_minimum_lies_below_samples(seed: u64, n in 2usize..=6) {
        let tol = tol();
        let mut corpus = Corpus::new(seed);
        let t = corpus.member(n, 100.0).t;
        let pair = optimal_pair(&t, &tol).unwrap();
        let minimal = cone_minimal(&pair.a, &t, &tol).unwrap();
        let co_kernel = range_kernel(&t.adjoint(), &tol).1;
        let z = if co_kernel.dim() == 0 {
            CMatrix::zeros(n, n)
        } else {
            let m = corpus.psd_any_rank(co_kernel.dim());
            &co_kernel.basis * m * co_kernel.basis.adjoint()
        };
        let sample = cone_sample(&pair.a, &t, &z, &tol).unwrap();
        prop_assert!(min_eig(&(&sample.b - &minimal.b0)) >= -1e-10);
    }

    #[test]
    fn schur_complement_is_ordered(seed: u64, n in 1usize..=7) {
        let tol = tol();
        let mut corpus = Corpus::new(seed);
        let b = corpus.psd_any_rank(n);
        let k = corpus.dim(0, n);
        let s = corpus.subspace(n, k);
        let pair = schur_complement(&b, &s, &tol).unwrap();
        let scale = norm2(&b);
        prop_assert!(min_eig(&pair.complement) >= -1e-10 * scale);
        prop_assert!(min_eig(&(&b - &pair.complement)) >= -1e-10 * scale);
        prop_assert!(norm2(&(s.basis.adjoint() * &pair.complement)) <= 1e-9 * scale.max(1.0));
    }

    #[test]
    fn invertible_factor_is_positive_definite(seed: u64, n in 1usize..=8) {
        let tol = tol();
        let t = member(seed, n);
        let pair = invertible_factor_pair(&t, &tol).unwrap();
        prop_assert!(pair.b.symmetric_eigenvalues().min() > 0.0);
        prop_assert!(pair.residual <= tol.tol_eq * norm2(&t).max(f64::MIN_POSITIVE));
    }

    #[test]
    fn m_decomposition_parts_are_members(seed: u64, n in 1usize..=6) {
        let tol = tol();
        let t = member(seed, n);
        let d = m_decomposition(&t, &tol).unwrap();
        prop_assert!(d.condition_ii);
        prop_assert!(is_l2p(&d.t_m, &tol).unwrap().in_l2p);
        prop_assert!(is_l2p(d.t_upper_m.as_ref().unwrap(), &tol).unwrap().in_l2p);
    }

    #[test]
    fn square_roots_square_back(seed: u64, n in 1usize..=8) {
        let tol = tol();
        let t = member(seed, n);
        let r = sqrt_l2p(&t, &tol).unwrap();
        prop_assert!(norm2(&(&r * &r - &t)) <= tol.tol_eq * norm2(&t).max(f64::MIN_POSITIVE));
        prop_assert!(is_l2p(&r, &tol).unwrap().in_l2p);
    }

    #[test]
    fn geometric_mean_solves_riccati(seed: u64, n in 1usize..=6) {
        let tol = tol();
        let mut corpus = Corpus::new(seed);
        let e = corpus.pd(n, 0.05);
        let f = corpus.psd_any_rank(n);
        let m = geometric_mean(&e, &f, &tol).unwrap();
        prop_assert!(norm2(&(&m - m.adjoint())) <= 1e-12 * norm2(&m).max(1.0));
        let back = &m * e.clone().try_inverse().unwrap() * &m;
        prop_assert!(norm2(&(back - &f)) <= tol.tol_eq * 100.0);
    }

    #[test]
    fn geometric_mean_is_monotone_on_commuting_triples(seed: u64, n in 1usize..=6) {
        let tol = tol();
        let mut corpus = Corpus::new(seed);
        let u = corpus.unitary(n);
        let conj = |d: Vec<f64>| &u * real_diag(&d) * u.adjoint();
        let small: Vec<f64> = (0..n).map(|_| corpus.uniform(0.1, 1.0)).collect();
        let big: Vec<f64> = small.iter().map(|&v| v + corpus.uniform(0.0, 1.0)).collect();
        let f: Vec<f64> = (0..n).map(|_| corpus.uniform(0.0, 1.0)).collect();
        let (e1, e2, f) = (conj(small), conj(big), conj(f));
        let lo = geometric_mean(&e1, &f, &tol).unwrap();
        let hi = geometric_mean(&e2, &f, &tol).unwrap();
        prop_assert!(min_eig(&(hi - lo)) >= -tol.tol_psd);
    }

    #[test]
    fn riesz_terms_partition_the_identity(seed: u64, n in 1usize..=8) {
        let tol = tol();
        let t = Corpus::new(seed).clustered_member(n, 100.0).t;
        let r = riesz_decomposition(&t, &tol).unwrap();
        let scale = norm2(&t);
        prop_assert!(r.partition_defect() <= tol.tol_eq * scale.max(1.0));
        prop_assert!(r.orthogonality_defect() <= tol.tol_eq * scale.max(1.0));
        prop_assert!(norm2(&(r.reconstruct() - &t)) <= tol.tol_eq * scale);
        prop_assert!(r.optimal_pair_sum.residual <= tol.tol_eq * scale);
    }

    #[test]
    fn eigenspaces_carry_no_jordan_blocks(seed: u64, n in 1usize..=8) {
        let tol = tol();
        let t = Corpus::new(seed).clustered_member(n, 100.0).t;
        for cluster in eig_general(&t, &tol).unwrap().clusters {
            let local = local_spectral_subspace(&t, cluster.eigenvalue.re, &tol).unwrap();
            prop_assert!(local.jordan_free);
            prop_assert_eq!(local.kernel_sq_dim, local.subspace.dim());
            prop_assert_eq!(local.subspace.dim(), cluster.algebraic_mult);
        }
    }

    #[test]
    fn moore_penrose_conditions_hold(seed: u64, n in 1usize..=8) {
        let tol = tol();
        let t = member(seed, n);
        let d = mp_inverse_l2p(&t, &tol).unwrap().dagger;
        let scale = norm2(&t).max(norm2(&d)).max(1.0).powi(3);
        let herm = |m: CMatrix| norm2(&(&m - m.adjoint()));
        prop_assert!(norm2(&(&t * &d * &t - &t)) <= tol.tol_eq * scale);
        prop_assert!(norm2(&(&d * &t * &d - &d)) <= tol.tol_eq * scale);
        prop_assert!(herm(&t * &d) <= tol.tol_eq * scale);
        prop_assert!(herm(&d * &t) <= tol.tol_eq * scale);
        let oracle = oracle_pinv(&t, 1e-10);
        prop_assert!(norm2(&(&d - &oracle)) <= tol.tol_eq * norm2(&oracle).max(1.0));
    }

    #[test]
    fn borel_calculus_is_multiplicative(seed: u64, n in 1usize..=6, i in 0usize..4, j in 0usize..4) {
        let tol = tol();
        let t = member(seed, n);
        let fs: [fn(f64) -> f64; 4] = [|x| x, |x| x * x, f64::sqrt, f64::exp];
        let (f, g) = (fs[i], fs[j]);
        let fg = borel_calculus(&t, &|x| f(x) * g(x), &tol).unwrap();
        let prod = borel_calculus(&t, &f, &tol).unwrap() * borel_calculus(&t, &g, &tol).unwrap();
        let scale = norm2(&fg).max(norm2(&prod)).max(1.0);
        prop_assert!(norm2(&(fg - prod)) <= tol.tol_eq * scale);
    }

    #[test]
    fn pedersen_takesaki_is_positive(seed: u64, n in 1usize..=6, definite: bool) {
        let tol = tol();
        let mut corpus = Corpus::new(seed);
        let h = if definite { corpus.pd(n, 0.01) } else { corpus.psd_any_rank(n) };
        let k = corpus.psd_any_rank(n);
        let pt = pedersen_takesaki(&h, &k, &tol).unwrap();
        prop_assert!(min_eig(&pt.x) >= -tol.tol_psd * norm2(&pt.x).max(1.0));
        prop_assert!(pt.residual <= 1e-8 * pt.scale);
    }

    #[test]
    fn dilations_recover_the_corner(seed: u64, n in 1usize..=6) {
        let tol = tol();
        let t = member(seed, n);
        let scale = norm2(&t);
        let first = dilate_pos_proj(&t, &tol).unwrap();
        prop_assert!(first.projection_residual <= 1e-10);
        prop_assert!(first.corner_residual <= tol.tol_eq * scale.max(f64::MIN_POSITIVE));
        let second = dilate_proj_proj(&t, &tol).unwrap();
        let (residual, bound) = proj_proj_residual(&second.ambient, &tol);
        prop_assert!(residual <= bound);
        prop_assert!(second.corner_residual <= tol.tol_eq * scale.max(f64::MIN_POSITIVE));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn kappa_grows_as_angles_shrink(mut angles in prop::collection::vec(0.05f64..1.5, 8)) {
        angles.sort_by(|a, b| b.total_cmp(a));
        let r = qs_not_sim_truncation(&[2, 4, 6, 8], &Schedule::Explicit(angles), &tol()).unwrap();
        let kappa = r.series("kappa");
        prop_assert!(kappa.windows(2).all(|w| w[1] >= w[0] * (1.0 - 1e-9)), "{kappa:?}");
    }

    #[test]
    fn witness_norm_grows_as_weights_shrink(mut weights in prop::collection::vec(0.01f64..0.99, 8)) {
        weights.sort_by(|a, b| b.total_cmp(a));
        let r = sqrtless_truncation(&[2, 4, 6, 8], &Schedule::Explicit(weights), &tol()).unwrap();
        let w = r.series("witness_inverse_norm");
        prop_assert!(w.windows(2).all(|p| p[1] >= p[0] * (1.0 - 1e-9)), "{w:?}");
    }

    #[test]
    fn constant_weights_keep_witness_bounded(s in 0.01f64..0.99) {
        let r = sqrtless_truncation(&[2, 4, 8], &Schedule::Constant(s), &tol()).unwrap();
        let w = r.series("witness_inverse_norm");
        prop_assert!(w.iter().all(|&v| (v - w[0]).abs() <= 1e-9 * w[0]));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn compact_construction_intertwines(
        lambdas in prop::collection::vec(0.01f64..2.0, 1..5),
        dims_seed: u64,
        angle in 0.0f64..1.2,
    ) {
        let mut corpus = Corpus::new(dims_seed);
        let dims: Vec<usize> = lambdas.iter().map(|_| corpus.dim(1, 3)).collect();
        let r = compact_factor_truncation(&lambdas, &dims, angle, &tol()).unwrap();
        prop_assert!(r.series("intertwining_residual")[0] <= tol().tol_eq);
        prop_assert_eq!(r.series("in_l2p"), vec![1.0]);
    }
}

#[test]
fn gallery_items_pass_their_certificates() {
    for name in GalleryName::ALL {
        let item = gallery(name, &GalleryParams::default(), &tol()).unwrap();
        assert!(item.certified(), "{name}: {:?}", item.certificates);
    }
}

fn rank_one(angle: f64) -> CMatrix {
    let (s, co) = angle.sin_cos();
    real_matrix(2, 2, &[co * co, co * s, co * s, s * s])
}

/// Every orthoprojection of `R²` whose angle lies on the grid.
fn projection_grid(steps: usize) -> Vec<CMatrix> {
    let mut out = vec![CMatrix::zeros(2, 2), CMatrix::identity(2, 2)];
    out.extend((0..steps).map(|k| rank_one(std::f64::consts::PI * k as f64 / steps as f64)));
    out
}

#[test]
fn proj_proj_test_matches_brute_force_on_a_grid() {
    let tol = tol();
    let grid = projection_grid(12);
    let brute = |t: &CMatrix| {
        grid.iter()
            .any(|p| grid.iter().any(|q| norm2(&(p * q - t)) <= 1e-9))
    };
    let mut candidates = Vec::new();
    for p in &grid {
        for q in &grid {
            for s in [0.5, 1.0, 2.0] {
                candidates.push(p * q * c(s));
            }
        }
    }
    for x in [-1.0, 0.5, 1.0] {
        candidates.push(real_matrix(2, 2, &[1.0, x, 0.0, 0.0]));
    }
    for t in &candidates {
        let (residual, bound) = proj_proj_residual(t, &tol);
        let fast = residual <= bound;
        assert_eq!(fast, brute(t), "{t}");
    }
}
