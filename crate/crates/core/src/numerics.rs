//! Complex dense linear algebra shared by all detectors.
//!
//! Everything here operates on small dense matrices (tens of rows/columns),
//! so closed-form normal-equation solves and plain SVDs are the right tools.
//! The one performance-sensitive primitive is matrix multiplication, which is
//! routed through SIMD `cgemm` kernels (see [`fast_mul`]) because the
//! iterative detectors spend almost all of their time in products like
//! `H^H * P * (Y - H*S)`.

use nalgebra::DMatrix;
use num_complex::Complex;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Complex scalar used everywhere in this crate.
pub type C64 = Complex<f64>;
/// Dense complex matrix (column-major).
pub type CMat = DMatrix<C64>;
/// Dense complex column vector.
pub type CVec = nalgebra::DVector<C64>;

/// Condition-number threshold above which a Gram matrix is treated as
/// rank-deficient instead of being silently regularized.
pub const COND_LIMIT: f64 = 1e12;

/// Draw one circularly-symmetric complex Gaussian sample of unit variance,
/// i.e. `(g1 + i*g2)/sqrt(2)` with `g1`, `g2` standard real Gaussians.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Matrix with i.i.d. unit-variance circularly-symmetric complex Gaussian entries.
pub fn complex_gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMat {
    CMat::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// Vector with i.i.d. unit-variance circularly-symmetric complex Gaussian entries.
pub fn complex_gaussian_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CVec {
    CVec::from_fn(n, |_, _| complex_gaussian(rng))
}

/// `a * b` through matrixmultiply's SIMD complex kernels.
///
/// nalgebra's generic path is a scalar loop for complex elements; the cgemm
/// kernels are several times faster, which matters in the detector loops.
pub fn fast_mul(a: &CMat, b: &CMat) -> CMat {
    assert_eq!(a.ncols(), b.nrows(), "fast_mul dimension mismatch");
    let mut c = CMat::zeros(a.nrows(), b.ncols());
    fast_mul_into(&mut c, a, b);
    c
}

/// `c = a * b` without allocating the output.
pub fn fast_mul_into(c: &mut CMat, a: &CMat, b: &CMat) {
    let (m, k) = a.shape();
    let (kb, n) = b.shape();
    assert_eq!(k, kb, "fast_mul dimension mismatch");
    assert_eq!(c.shape(), (m, n), "fast_mul output shape mismatch");
    if m == 0 || n == 0 {
        return;
    }
    if k == 0 {
        c.fill(C64::new(0.0, 0.0));
        return;
    }
    // Complex<f64> is repr(C) [re, im], matching matrixmultiply's CComplex64.
    unsafe {
        matrixmultiply::zgemm(
            matrixmultiply::CGemmOption::Standard,
            matrixmultiply::CGemmOption::Standard,
            m,
            k,
            n,
            [1.0, 0.0],
            a.as_ptr() as *const [f64; 2],
            1,
            m as isize,
            b.as_ptr() as *const [f64; 2],
            1,
            k as isize,
            [0.0, 0.0],
            c.as_mut_ptr() as *mut [f64; 2],
            1,
            m as isize,
        );
    }
}

/// `a^H * b` (adjoint of the left factor), allocating the output.
pub fn fast_adjoint_mul(a: &CMat, b: &CMat) -> CMat {
    // The cgemm kernels take a conjugation flag but not a transposition, so
    // materialize the adjoint; these matrices are small.
    fast_mul(&a.adjoint(), b)
}

/// Frobenius inner product `<a, b> = sum conj(a_ij) b_ij`.
pub fn frobenius_inner(a: &CMat, b: &CMat) -> C64 {
    assert_eq!(a.shape(), b.shape());
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

fn check_finite(a: &CMat, what: &'static str) -> Result<()> {
    if a.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite { what })
    }
}

/// Moore-Penrose pseudoinverse of a full-rank matrix via the normal-equation
/// closed forms: `(A^H A)^-1 A^H` for tall/square `A`, `A^H (A A^H)^-1` for
/// wide `A`. The Gram matrix is solved with a Cholesky factorization after a
/// condition estimate; conditioning beyond [`COND_LIMIT`] is an error.
pub fn pseudoinverse(a: &CMat) -> Result<CMat> {
    check_finite(a, "pseudoinverse input")?;
    let tall = a.nrows() >= a.ncols();
    let gram = if tall {
        fast_adjoint_mul(a, a)
    } else {
        fast_mul(a, &a.adjoint())
    };
    let gram_inv = invert_gram(&gram)?;
    Ok(if tall {
        fast_mul(&gram_inv, &a.adjoint())
    } else {
        fast_mul(&a.adjoint(), &gram_inv)
    })
}

/// Invert a Hermitian positive-definite Gram matrix, failing on
/// rank deficiency (condition estimate above [`COND_LIMIT`]).
fn invert_gram(gram: &CMat) -> Result<CMat> {
    let sv = gram.clone().singular_values();
    let smax = sv.iter().cloned().fold(0.0_f64, f64::max);
    let smin = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if smax == 0.0 || smin <= 0.0 || smax / smin > COND_LIMIT {
        return Err(Error::RankDeficient {
            cond: if smin > 0.0 { smax / smin } else { f64::INFINITY },
            limit: COND_LIMIT,
        });
    }
    let chol = nalgebra::Cholesky::new(gram.clone()).ok_or(Error::RankDeficient {
        cond: smax / smin,
        limit: COND_LIMIT,
    })?;
    Ok(chol.solve(&CMat::identity(gram.nrows(), gram.ncols())))
}

/// Orthogonal projection onto the complement of a nulled column space.
///
/// Holds the dense `B x B` matrix together with the factored form
/// `P = I - Q * Q_pinv` so detector loops can apply it in `O(B*I*K)` instead
/// of `O(B^2*K)`.
#[derive(Debug, Clone)]
pub struct Projector {
    matrix: CMat,
    factor: Option<(CMat, CMat)>,
    rank_nulled: usize,
}

impl Projector {
    /// The identity projector (nothing nulled).
    pub fn identity(dim: usize) -> Self {
        Projector {
            matrix: CMat::identity(dim, dim),
            factor: None,
            rank_nulled: 0,
        }
    }

    /// Dense `B x B` projection matrix.
    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    /// Dimension count `I` of the nulled subspace.
    pub fn rank_nulled(&self) -> usize {
        self.rank_nulled
    }

    /// Ambient dimension `B`.
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// `P * m` using the factored form when available.
    pub fn apply(&self, m: &CMat) -> CMat {
        match &self.factor {
            None => m.clone(),
            Some((basis, basis_pinv)) => {
                let coeff = fast_mul(basis_pinv, m);
                let mut out = m.clone();
                let corr = fast_mul(basis, &coeff);
                out -= corr;
                out
            }
        }
    }
}

/// `P = I_B - J * J^+`, the orthogonal projection onto the complement of
/// `col(J)`. Fails when `jhat` is column-rank-deficient, in which case the
/// caller should reduce the assumed jammer dimension.
pub fn orth_complement_projector(jhat: &CMat) -> Result<Projector> {
    let b = jhat.nrows();
    let i = jhat.ncols();
    if i == 0 {
        return Ok(Projector::identity(b));
    }
    if i > b {
        return Err(Error::Dimension {
            what: "projector basis has more columns than rows",
        });
    }
    let jpinv = pseudoinverse(jhat).map_err(|e| match e {
        Error::RankDeficient { .. } => Error::ProjectorRankDeficient,
        other => other,
    })?;
    let mut matrix = CMat::identity(b, b);
    matrix -= fast_mul(jhat, &jpinv);
    Ok(Projector {
        matrix,
        factor: Some((jhat.clone(), jpinv)),
        rank_nulled: i,
    })
}

/// Single-power-iteration approximate SVD: returns `[u_1, ..., u_i]`, the
/// approximate principal left-singular vectors of `e`.
///
/// Per dimension: draw `x ~ CN(0, I_K)`, form `x' = E^H E x`, normalize to
/// `v`, set `sigma = |E v|`, `u = E v / sigma`, then deflate
/// `E <- E - sigma u v^H`. A numerically zero `x'` or `sigma` aborts with a
/// degenerate-direction error carrying the columns found so far.
pub fn approx_svd<R: Rng + ?Sized>(e: &CMat, count: usize, rng: &mut R) -> Result<CMat> {
    let (b, k) = e.shape();
    assert!(count >= 1, "approx_svd needs at least one direction");
    assert!(
        count <= b.min(k),
        "approx_svd direction count exceeds matrix rank bound"
    );
    check_finite(e, "approx_svd input")?;
    let mut residual = e.clone();
    let mut columns: Vec<CVec> = Vec::with_capacity(count);
    for _ in 0..count {
        let x = complex_gaussian_vector(k, rng);
        let ex = &residual * &x;
        let xp = residual.adjoint() * ex;
        let xp_norm = xp.norm();
        if xp_norm <= f64::MIN_POSITIVE {
            return Err(degenerate(b, columns, count));
        }
        let v = xp / C64::new(xp_norm, 0.0);
        let ev = &residual * &v;
        let sigma = ev.norm();
        if sigma <= f64::MIN_POSITIVE {
            return Err(degenerate(b, columns, count));
        }
        let u = ev / C64::new(sigma, 0.0);
        // deflate: E <- E - sigma * u * v^H
        for c in 0..k {
            let scale = C64::new(sigma, 0.0) * v[c].conj();
            for r in 0..b {
                residual[(r, c)] -= scale * u[r];
            }
        }
        columns.push(u);
    }
    Ok(CMat::from_columns(&columns))
}

fn degenerate(b: usize, columns: Vec<CVec>, requested: usize) -> Error {
    let found = columns.len();
    let partial = if found == 0 {
        CMat::zeros(b, 0)
    } else {
        CMat::from_columns(&columns)
    };
    Error::DegenerateDirection {
        found,
        requested,
        partial,
    }
}

/// Exact principal left-singular vectors: the `count` columns of `U`
/// belonging to the largest singular values of `e`. When singular values tie
/// at the cut, any valid choice is returned.
pub fn exact_top_left_singular_vectors(e: &CMat, count: usize) -> CMat {
    let (b, k) = e.shape();
    assert!(count <= b.min(k), "requested more singular vectors than exist");
    let svd = e.clone().svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| {
        svd.singular_values[j]
            .partial_cmp(&svd.singular_values[i])
            .expect("singular values are finite")
    });
    let cols: Vec<CVec> = order[..count]
        .iter()
        .map(|&idx| u.column(idx).into_owned())
        .collect();
    CMat::from_columns(&cols)
}

/// Barzilai-Borwein stepsize (first variant): `|dS|_F^2 / Re<dS, dG>`,
/// falling back to `fallback` when the curvature estimate is not positive.
pub fn bb_stepsize(ds: &CMat, dg: &CMat, fallback: f64) -> f64 {
    debug_assert!(fallback > 0.0, "fallback stepsize must be positive");
    let num = ds.norm_squared();
    let den = frobenius_inner(ds, dg).re;
    if den > 0.0 && num > 0.0 {
        let tau = num / den;
        if tau.is_finite() && tau > 0.0 {
            return tau;
        }
    }
    fallback
}

/// Largest principal angle (radians) between the column spans of two
/// matrices with orthonormal columns, via the singular values of `U1^H U2`.
pub fn subspace_angle(u1: &CMat, u2: &CMat) -> Result<f64> {
    if u1.ncols() != u2.ncols() || u1.nrows() != u2.nrows() {
        return Err(Error::Dimension {
            what: "subspace_angle inputs must have matching shapes",
        });
    }
    for (name, u) in [("first", u1), ("second", u2)] {
        let gram = fast_adjoint_mul(u, u);
        let dev = (&gram - CMat::identity(u.ncols(), u.ncols())).norm();
        if dev > 1e-6 {
            return Err(Error::NotOrthonormal {
                which: name,
                deviation: dev,
            });
        }
    }
    // cosine from U1^H U2, sine from the residual (I - U1 U1^H) U2; the
    // atan2 combination stays accurate at both ends of [0, pi/2].
    let cross = fast_adjoint_mul(u1, u2);
    let sv = cross.singular_values();
    let cos = sv.iter().cloned().fold(1.0_f64, f64::min).clamp(0.0, 1.0);
    let mut residual = u2.clone();
    residual -= fast_mul(u1, &cross);
    let sin = residual
        .singular_values()
        .iter()
        .cloned()
        .fold(0.0_f64, f64::max)
        .clamp(0.0, 1.0);
    Ok(sin.atan2(cos).clamp(0.0, std::f64::consts::FRAC_PI_2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn rng(seed: u64) -> ChaCha12Rng {
        ChaCha12Rng::seed_from_u64(seed)
    }

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn fast_mul_matches_nalgebra() {
        let mut r = rng(7);
        let a = complex_gaussian_matrix(5, 3, &mut r);
        let b = complex_gaussian_matrix(3, 4, &mut r);
        let fast = fast_mul(&a, &b);
        let slow = &a * &b;
        assert!((fast - slow).norm() < 1e-12);
    }

    #[test]
    fn pseudoinverse_identity() {
        let eye = CMat::identity(3, 3);
        let p = pseudoinverse(&eye).unwrap();
        assert!((p - CMat::identity(3, 3)).norm() < 1e-12);
    }

    #[test]
    fn pseudoinverse_column_vector() {
        // v^+ = v^H / |v|^2, so v^+ v = 1.
        let v = CMat::from_column_slice(3, 1, &[c(1.0, 2.0), c(-0.5, 0.0), c(0.0, 1.5)]);
        let p = pseudoinverse(&v).unwrap();
        let expected = v.adjoint() / C64::new(v.norm_squared(), 0.0);
        assert!((&p - expected).norm() < 1e-12);
        let pv = fast_mul(&p, &v);
        assert!((pv[(0, 0)] - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn pseudoinverse_satisfies_moore_penrose() {
        let mut r = rng(42);
        for _ in 0..20 {
            let a = complex_gaussian_matrix(4, 2, &mut r);
            let p = pseudoinverse(&a).unwrap();
            let pa = fast_mul(&p, &a);
            assert!((pa - CMat::identity(2, 2)).norm() < 1e-10);
            let apa = fast_mul(&a, &fast_mul(&p, &a));
            assert!((apa - &a).norm() < 1e-10);
            // wide case
            let w = complex_gaussian_matrix(2, 5, &mut r);
            let wp = pseudoinverse(&w).unwrap();
            let wwp = fast_mul(&w, &wp);
            assert!((wwp - CMat::identity(2, 2)).norm() < 1e-10);
        }
    }

    #[test]
    fn pseudoinverse_rejects_rank_deficient() {
        let mut a = CMat::zeros(4, 2);
        for r in 0..4 {
            a[(r, 0)] = c(1.0, 0.0);
            a[(r, 1)] = c(2.0, 0.0); // second column collinear with first
        }
        match pseudoinverse(&a) {
            Err(Error::RankDeficient { .. }) => {}
            other => panic!("expected rank-deficiency error, got {other:?}"),
        }
    }

    #[test]
    fn projector_axis_aligned() {
        let e1 = CMat::from_column_slice(3, 1, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let p = orth_complement_projector(&e1).unwrap();
        let expected = CMat::from_diagonal(&CVec::from_vec(vec![
            c(0.0, 0.0),
            c(1.0, 0.0),
            c(1.0, 0.0),
        ]));
        assert!((p.matrix() - expected).norm() < 1e-12);
        assert_eq!(p.rank_nulled(), 1);
    }

    #[test]
    fn projector_identities_hold() {
        let mut r = rng(3);
        for _ in 0..50 {
            let j = complex_gaussian_matrix(6, 2, &mut r);
            let p = orth_complement_projector(&j).unwrap();
            let m = p.matrix();
            let pp = fast_mul(m, m);
            assert!((pp - m).norm() <= 1e-10 * m.norm());
            assert!((m - m.adjoint()).norm() <= 1e-10 * m.norm());
            let trace: C64 = m.diagonal().iter().sum();
            assert!((trace.re - 4.0).abs() < 1e-8 && trace.im.abs() < 1e-8);
            let pj = p.apply(&j);
            assert!(pj.iter().all(|z| z.norm() < 1e-10));
        }
    }

    #[test]
    fn projector_trace_orthonormal_basis() {
        let mut r = rng(11);
        let g = complex_gaussian_matrix(8, 3, &mut r);
        let q = exact_top_left_singular_vectors(&g, 3);
        let p = orth_complement_projector(&q).unwrap();
        let trace: C64 = p.matrix().diagonal().iter().sum();
        assert!((trace.re - 5.0).abs() < 1e-8);
    }

    #[test]
    fn projector_apply_matches_dense() {
        let mut r = rng(5);
        let j = complex_gaussian_matrix(7, 2, &mut r);
        let p = orth_complement_projector(&j).unwrap();
        let m = complex_gaussian_matrix(7, 9, &mut r);
        let dense = fast_mul(p.matrix(), &m);
        let factored = p.apply(&m);
        assert!((dense - factored).norm() < 1e-10);
    }

    #[test]
    fn approx_svd_rank_one_fixed_point() {
        let mut r = rng(9);
        let u = complex_gaussian_vector(6, &mut r).normalize();
        let v = complex_gaussian_vector(10, &mut r).normalize();
        let e = CMat::from_fn(6, 10, |i, j| C64::new(3.0, 0.0) * u[i] * v[j].conj());
        let got = approx_svd(&e, 1, &mut r).unwrap();
        let overlap = got.column(0).dotc(&u).norm();
        assert!(overlap > 1.0 - 1e-8, "overlap {overlap}");
        assert!((got.column(0).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn approx_svd_zero_input_degenerates() {
        let mut r = rng(10);
        let e = CMat::zeros(4, 5);
        match approx_svd(&e, 1, &mut r) {
            Err(Error::DegenerateDirection { found, .. }) => assert_eq!(found, 0),
            other => panic!("expected degenerate-direction error, got {other:?}"),
        }
    }

    #[test]
    fn approx_svd_tracks_noisy_dominant_subspace() {
        let mut r = rng(12);
        // E = U diag(10, 1) V^H + 0.01 * G
        let gu = complex_gaussian_matrix(8, 2, &mut r);
        let u = exact_top_left_singular_vectors(&gu, 2);
        let gv = complex_gaussian_matrix(12, 2, &mut r);
        let v = exact_top_left_singular_vectors(&gv, 2);
        let d = CMat::from_partial_diagonal(2, 2, &[c(10.0, 0.0), c(1.0, 0.0)]);
        let mut e = fast_mul(&fast_mul(&u, &d), &v.adjoint());
        e += complex_gaussian_matrix(8, 12, &mut r) * c(0.01, 0.0);
        let approx = approx_svd(&e, 2, &mut r).unwrap();
        let exact = exact_top_left_singular_vectors(&e, 2);
        // orthonormalize approx columns (they are only approximately orthonormal)
        let approx_on = exact_top_left_singular_vectors(&approx, 2);
        let angle = subspace_angle(&approx_on, &exact).unwrap();
        assert!(angle < 0.15, "subspace angle {angle}");
    }

    #[test]
    fn approx_svd_exact_rank_matches_span() {
        let mut r = rng(13);
        for _ in 0..10 {
            let a = complex_gaussian_matrix(7, 2, &mut r);
            let b = complex_gaussian_matrix(2, 9, &mut r);
            let e = fast_mul(&a, &b); // exactly rank 2
            let approx = approx_svd(&e, 2, &mut r).unwrap();
            let approx_on = exact_top_left_singular_vectors(&approx, 2);
            let exact = exact_top_left_singular_vectors(&e, 2);
            let angle = subspace_angle(&approx_on, &exact).unwrap();
            assert!(angle < 1e-6, "angle {angle}");
        }
    }

    #[test]
    fn exact_svd_diagonal() {
        let e = CMat::from_partial_diagonal(3, 2, &[c(3.0, 0.0), c(1.0, 0.0)]);
        let u = exact_top_left_singular_vectors(&e, 1);
        assert!((u[(0, 0)].norm() - 1.0).abs() < 1e-12);
        assert!(u[(1, 0)].norm() < 1e-12 && u[(2, 0)].norm() < 1e-12);
    }

    #[test]
    fn exact_svd_beats_approx_on_residual() {
        let mut r = rng(14);
        for _ in 0..10 {
            let e = complex_gaussian_matrix(8, 10, &mut r);
            let exact = exact_top_left_singular_vectors(&e, 3);
            let approx = approx_svd(&e, 3, &mut r).unwrap();
            let p_exact = orth_complement_projector(&exact).unwrap();
            let p_approx = orth_complement_projector(&approx).unwrap();
            let res_exact = p_exact.apply(&e).norm();
            let res_approx = p_approx.apply(&e).norm();
            assert!(
                res_exact <= res_approx + 1e-10,
                "Eckart-Young violated: {res_exact} vs {res_approx}"
            );
        }
    }

    #[test]
    fn bb_stepsize_isotropic_quadratic() {
        let mut r = rng(15);
        let ds = complex_gaussian_matrix(3, 4, &mut r);
        let dg = &ds * c(2.5, 0.0);
        let tau = bb_stepsize(&ds, &dg, 1.0);
        assert!((tau - 1.0 / 2.5).abs() < 1e-12);
    }

    #[test]
    fn bb_stepsize_nonpositive_curvature_falls_back() {
        let mut r = rng(16);
        let ds = complex_gaussian_matrix(3, 4, &mut r);
        let dg = &ds * c(-1.0, 0.0);
        assert_eq!(bb_stepsize(&ds, &dg, 0.37), 0.37);
        let zero = CMat::zeros(3, 4);
        assert_eq!(bb_stepsize(&zero, &zero, 0.37), 0.37);
    }

    #[test]
    fn bb_stepsize_analytic_quadratic() {
        // f(S) = |A(S - S*)|_F^2 has gradient 2 A^H A (S - S*), so
        // dG = 2 A^H A dS and BB1 = |dS|^2 / <dS, 2 A^H A dS>.
        let mut r = rng(17);
        let a = complex_gaussian_matrix(5, 3, &mut r);
        let ds = complex_gaussian_matrix(3, 4, &mut r);
        let aha = fast_adjoint_mul(&a, &a);
        let dg = fast_mul(&aha, &ds) * c(2.0, 0.0);
        let tau = bb_stepsize(&ds, &dg, 1.0);
        let expected = ds.norm_squared() / frobenius_inner(&ds, &dg).re;
        assert!((tau - expected).abs() < 1e-12 * expected);
    }

    #[test]
    fn subspace_angle_cases() {
        let mut r = rng(18);
        let g = complex_gaussian_matrix(6, 2, &mut r);
        let u = exact_top_left_singular_vectors(&g, 2);
        assert!(subspace_angle(&u, &u).unwrap() < 1e-9);

        // orthogonal subspaces: split the identity
        let eye = CMat::identity(4, 4);
        let u1 = eye.columns(0, 2).into_owned();
        let u2 = eye.columns(2, 2).into_owned();
        let angle = subspace_angle(&u1, &u2).unwrap();
        assert!((angle - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn subspace_angle_planted_rotation() {
        let theta: f64 = 0.3;
        // rotate e1 towards e2 inside a 2-D real slice of C^4
        let mut u1 = CMat::zeros(4, 1);
        u1[(0, 0)] = c(1.0, 0.0);
        let mut u2 = CMat::zeros(4, 1);
        u2[(0, 0)] = c(theta.cos(), 0.0);
        u2[(1, 0)] = c(theta.sin(), 0.0);
        let angle = subspace_angle(&u1, &u2).unwrap();
        assert!((angle - theta).abs() < 1e-9);
    }

    #[test]
    fn subspace_angle_rejects_non_orthonormal() {
        let mut r = rng(19);
        let g = complex_gaussian_matrix(5, 2, &mut r);
        match subspace_angle(&g, &g) {
            Err(Error::NotOrthonormal { .. }) => {}
            other => panic!("expected non-orthonormal error, got {other:?}"),
        }
    }

    #[test]
    fn complex_gaussian_moments() {
        let mut r = rng(20);
        let n = 20_000;
        let mut mean = C64::new(0.0, 0.0);
        let mut var = 0.0;
        for _ in 0..n {
            let z = complex_gaussian(&mut r);
            mean += z;
            var += z.norm_sqr();
        }
        mean /= C64::new(n as f64, 0.0);
        var /= n as f64;
        assert!(mean.norm() < 0.02, "mean {mean}");
        assert!((var - 1.0).abs() < 0.03, "variance {var}");
    }
}
