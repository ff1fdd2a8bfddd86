//! Monte Carlo oracle for `delta_{1,3}`: sample four uniform random lines
//! in RP³ and count the real lines meeting all four.
//!
//! The lines meeting three pairwise-disjoint lines form one ruling of the
//! unique quadric surface through them; a fourth line meets that ruling in
//! as many points as it meets the quadric, which is 0 or 2 for a generic
//! configuration (real solutions of a quadratic come in conjugate pairs).
//! Degenerate configurations (tangency, rank drops) have measure zero and
//! are resampled, never perturbed, so the estimator stays unbiased.

use crate::error::{Error, Result};
use crate::numerics::mc::{MonteCarloEstimate, Welford, SHARD_SIZE};
use crate::numerics::rng::{shard_seed, Rng};
use nalgebra::{DMatrix, Matrix2, Matrix4, SMatrix, SVector};
use rayon::prelude::*;

type Frame = SMatrix<f64, 4, 2>;
type Vec4 = SVector<f64, 4>;

/// Tolerance for the tangency test on the restricted binary quadratic form.
const DISCRIMINANT_TOL: f64 = 1e-12;
/// Rank-gap tolerance for the quadric linear system.
const RANK_TOL: f64 = 1e-8;
/// Residual bound per trial before the sample is declared degenerate.
const MAX_RESAMPLES_PER_TRIAL: u32 = 1_000;

/// A line in RP³: the projectivized column span of a 4x2 orthonormal frame.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectiveLine {
    frame: Frame,
}

impl ProjectiveLine {
    /// Uniform line with respect to the O(4)-invariant measure: the
    /// orthonormalized column span of a standard Gaussian 4x2 matrix.
    pub fn sample(rng: &mut Rng) -> Self {
        loop {
            let m = Frame::from_fn(|_, _| rng.gaussian());
            if let Some(line) = Self::from_spanning(&m) {
                return line;
            }
        }
    }

    /// Orthonormalize a spanning 4x2 matrix; `None` on numerical rank < 2.
    pub fn from_spanning(m: &Frame) -> Option<Self> {
        let mut a = m.column(0).into_owned();
        let na = a.norm();
        if na < 1e-9 {
            return None;
        }
        a /= na;
        let mut b = m.column(1).into_owned();
        b -= a * a.dot(&b);
        // One re-orthogonalization pass keeps the defect near machine eps.
        b -= a * a.dot(&b);
        let nb = b.norm();
        if nb < 1e-9 {
            return None;
        }
        b /= nb;
        let mut frame = Frame::zeros();
        frame.set_column(0, &a);
        frame.set_column(1, &b);
        Some(ProjectiveLine { frame })
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    /// Point `s a + t b` on the affine frame of the line.
    pub fn point(&self, s: f64, t: f64) -> Vec4 {
        self.frame.column(0) * s + self.frame.column(1) * t
    }

    /// `|| frameᵀ frame - I ||` in the max norm.
    pub fn orthonormality_defect(&self) -> f64 {
        let g = self.frame.transpose() * self.frame;
        let mut d: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                let target = if i == j { 1.0 } else { 0.0 };
                d = d.max((g[(i, j)] - target).abs());
            }
        }
        d
    }

    /// The line transformed by a rotation of RP³.
    pub fn rotate(&self, r: &Matrix4<f64>) -> ProjectiveLine {
        ProjectiveLine::from_spanning(&(r * self.frame)).expect("rotation preserves rank")
    }

    /// Principal angles between two lines (cosines are the singular values
    /// of the 2x2 frame product).
    pub fn principal_angles(&self, other: &ProjectiveLine) -> [f64; 2] {
        let g: Matrix2<f64> = self.frame.transpose() * other.frame;
        let sv = g.svd(false, false).singular_values;
        let mut out = [0.0; 2];
        for (o, s) in out.iter_mut().zip(sv.iter()) {
            *o = s.clamp(-1.0, 1.0).acos();
        }
        out
    }
}

/// A quadric surface in RP³: symmetric 4x4 matrix, unit Frobenius norm,
/// defined up to sign.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadricSurface {
    q: Matrix4<f64>,
}

impl QuadricSurface {
    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.q
    }

    /// `pᵀ Q p`.
    pub fn evaluate(&self, p: &Vec4) -> f64 {
        (p.transpose() * self.q * p)[(0, 0)]
    }
}

/// Quadric monomial row of a point: diagonal entries carry `p_i²`, each
/// off-diagonal pair `(i, j)` carries `2 p_i p_j`, so the coefficient
/// vector is exactly `(Q_00, Q_11, Q_22, Q_33, Q_01, Q_02, Q_03, Q_12, Q_13, Q_23)`.
fn monomial_row(p: &Vec4) -> [f64; 10] {
    [
        p[0] * p[0],
        p[1] * p[1],
        p[2] * p[2],
        p[3] * p[3],
        2.0 * p[0] * p[1],
        2.0 * p[0] * p[2],
        2.0 * p[0] * p[3],
        2.0 * p[1] * p[2],
        2.0 * p[1] * p[3],
        2.0 * p[2] * p[3],
    ]
}

/// The unique quadric through three pairwise-disjoint lines, as the null
/// space of the 9x10 linear system built from three points per line (a
/// quadric restricted to a line is a binary quadratic, so three points
/// force containment). The system is padded with a zero row so the full
/// SVD exposes the structural null direction.
pub fn quadric_through(
    l1: &ProjectiveLine,
    l2: &ProjectiveLine,
    l3: &ProjectiveLine,
) -> Result<QuadricSurface> {
    let mut a = DMatrix::<f64>::zeros(10, 10);
    for (li, line) in [l1, l2, l3].iter().enumerate() {
        for (pi, (s, t)) in [(1.0, 0.0), (1.0, 1.0), (1.0, -1.0)].iter().enumerate() {
            let row = monomial_row(&line.point(*s, *t));
            for (c, v) in row.iter().enumerate() {
                a[(3 * li + pi, c)] = *v;
            }
        }
    }
    let svd = a.svd(false, true);
    let sv = &svd.singular_values;
    let mut order: Vec<usize> = (0..sv.len()).collect();
    order.sort_by(|&i, &j| sv[i].partial_cmp(&sv[j]).expect("finite singular values"));
    let (smallest, second, largest) = (order[0], order[1], order[sv.len() - 1]);
    if sv[second] < RANK_TOL * sv[largest] {
        return Err(Error::Degenerate(
            "quadric system has null space of dimension > 1".into(),
        ));
    }
    let v_t = svd.v_t.expect("V requested");
    let null = v_t.row(smallest);
    let mut q = Matrix4::zeros();
    for i in 0..4 {
        q[(i, i)] = null[i];
    }
    let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    for (idx, &(i, j)) in pairs.iter().enumerate() {
        q[(i, j)] = null[4 + idx];
        q[(j, i)] = null[4 + idx];
    }
    let norm = q.norm();
    if norm < 1e-300 {
        return Err(Error::Degenerate("null vector vanished".into()));
    }
    Ok(QuadricSurface { q: q / norm })
}

/// Number of real lines meeting all of `l1, ..., l4`: restrict the quadric
/// through the first three to the fourth line's frame and read the sign of
/// the discriminant of the resulting binary quadratic form.
pub fn count_real_meets(
    l1: &ProjectiveLine,
    l2: &ProjectiveLine,
    l3: &ProjectiveLine,
    l4: &ProjectiveLine,
) -> Result<u8> {
    let q = quadric_through(l1, l2, l3)?;
    count_meets_with_quadric(&q, l4)
}

pub(crate) fn count_meets_with_quadric(q: &QuadricSurface, l4: &ProjectiveLine) -> Result<u8> {
    let a = l4.point(1.0, 0.0);
    let b = l4.point(0.0, 1.0);
    let qa = q.evaluate(&a);
    let qb = q.evaluate(&b);
    let qab = (a.transpose() * q.q * b)[(0, 0)];
    let disc = qab * qab - qa * qb;
    let scale = qa.abs().max(qb.abs()).max(qab.abs());
    if disc.abs() < DISCRIMINANT_TOL * scale * scale {
        return Err(Error::Degenerate("fourth line tangent to the quadric".into()));
    }
    Ok(if disc > 0.0 { 2 } else { 0 })
}

/// `delta_{1,3}` estimate plus the degenerate-resample tally.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Delta13Estimate {
    pub estimate: MonteCarloEstimate,
    /// Configurations rejected as degenerate and redrawn.
    pub degenerate_resamples: u64,
    pub trials: u64,
}

/// Monte Carlo mean of the real intersection count over independent
/// four-line samples. Trials are sharded with derived seeds and merged in
/// shard order, so the result for a fixed `(trials, seed)` pair does not
/// depend on the worker count.
pub fn estimate_delta13(trials: u64, seed: u64) -> Result<Delta13Estimate> {
    if trials < 2 {
        return Err(Error::Domain(format!(
            "estimate_delta13 requires trials >= 2, got {trials}"
        )));
    }
    let num_shards = trials.div_ceil(SHARD_SIZE);
    let shards: Vec<Result<(Welford, u64)>> = (0..num_shards)
        .into_par_iter()
        .map(|shard| {
            let start = shard * SHARD_SIZE;
            let count = SHARD_SIZE.min(trials - start);
            let mut rng = Rng::new(shard_seed(seed, shard));
            let mut acc = Welford::new();
            let mut degenerate = 0u64;
            for _ in 0..count {
                let mut attempts = 0u32;
                loop {
                    let l1 = ProjectiveLine::sample(&mut rng);
                    let l2 = ProjectiveLine::sample(&mut rng);
                    let l3 = ProjectiveLine::sample(&mut rng);
                    let l4 = ProjectiveLine::sample(&mut rng);
                    match count_real_meets(&l1, &l2, &l3, &l4) {
                        Ok(c) => {
                            acc.push(f64::from(c));
                            break;
                        }
                        Err(Error::Degenerate(_)) => {
                            degenerate += 1;
                            attempts += 1;
                            if attempts > MAX_RESAMPLES_PER_TRIAL {
                                return Err(Error::Degenerate(
                                    "persistent degeneracy; generator misbehaving".into(),
                                ));
                            }
                        }
                        Err(e) => return Err(e),
                    }
                }
            }
            Ok((acc, degenerate))
        })
        .collect();

    let mut total = Welford::new();
    let mut degenerate = 0u64;
    for shard in shards {
        let (w, d) = shard?;
        total = total.merge(w);
        degenerate += d;
    }
    Ok(Delta13Estimate {
        estimate: total.into_estimate(seed),
        degenerate_resamples: degenerate,
        trials,
    })
}

/// Uniform random rotation of R⁴ (QR of a Gaussian matrix with the sign
/// convention that makes the distribution Haar).
pub fn random_rotation(rng: &mut Rng) -> Matrix4<f64> {
    let m = Matrix4::from_fn(|_, _| rng.gaussian());
    let qr = m.qr();
    let mut q = qr.q();
    let r = qr.r();
    for i in 0..4 {
        if r[(i, i)] < 0.0 {
            for row in 0..4 {
                q[(row, i)] = -q[(row, i)];
            }
        }
    }
    q
}

/// Number of points in the intersection of hyperplanes with the given
/// normal rows; errors on a numerical rank drop.
pub fn intersect_hyperplanes(normals: &DMatrix<f64>) -> Result<u32> {
    let n = normals.nrows();
    if normals.ncols() != n + 1 {
        return Err(Error::Domain(
            "expected n hyperplane normals in R^(n+1)".into(),
        ));
    }
    let sv = normals.clone().svd(false, false).singular_values;
    let max = sv.iter().cloned().fold(0.0f64, f64::max);
    let rank = sv.iter().filter(|&&s| s > 1e-10 * max).count();
    if rank < n {
        return Err(Error::Degenerate(format!(
            "hyperplane normals have rank {rank} < {n}"
        )));
    }
    Ok(1)
}

/// `delta_{0,n}` realized directly: `n` random hyperplanes of RP^n meet in
/// exactly one point; rank-deficient draws (measure zero) are resampled.
pub fn check_delta0(n: u32, seed: u64) -> Result<u32> {
    if n == 0 {
        return Err(Error::Domain("check_delta0 requires n >= 1".into()));
    }
    let mut rng = Rng::new(seed);
    for _ in 0..64 {
        let m = DMatrix::<f64>::from_fn(n as usize, n as usize + 1, |_, _| rng.gaussian());
        match intersect_hyperplanes(&m) {
            Ok(c) => return Ok(c),
            Err(Error::Degenerate(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::Degenerate(
        "persistent rank deficiency in hyperplane sampling".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Three disjoint lines of one ruling of {x0 x3 = x1 x2}: rows of the
    /// parametrization (1, t, s, st) with s fixed give span{(1,t,0,0),(0,0,1,t)}.
    fn ruling_line(t: f64) -> ProjectiveLine {
        let mut m = Frame::zeros();
        m.set_column(0, &Vec4::new(1.0, t, 0.0, 0.0));
        m.set_column(1, &Vec4::new(0.0, 0.0, 1.0, t));
        ProjectiveLine::from_spanning(&m).unwrap()
    }

    fn standard_quadric() -> Matrix4<f64> {
        // x0 x3 - x1 x2 as a symmetric matrix.
        let mut q = Matrix4::zeros();
        q[(0, 3)] = 0.5;
        q[(3, 0)] = 0.5;
        q[(1, 2)] = -0.5;
        q[(2, 1)] = -0.5;
        q
    }

    #[test]
    fn sampled_frames_are_orthonormal_and_deterministic() {
        let mut rng = Rng::new(9);
        for _ in 0..100 {
            let l = ProjectiveLine::sample(&mut rng);
            assert!(l.orthonormality_defect() < 1e-12);
        }
        let a = ProjectiveLine::sample(&mut Rng::new(33));
        let b = ProjectiveLine::sample(&mut Rng::new(33));
        assert_eq!(a.frame(), b.frame());
    }

    #[test]
    fn quadric_recovery_from_ruling_lines() {
        let q = quadric_through(&ruling_line(0.0), &ruling_line(1.0), &ruling_line(-1.0))
            .unwrap();
        let target = standard_quadric();
        let target = target / target.norm();
        // Up to sign.
        let diff_plus = (q.matrix() - target).norm();
        let diff_minus = (q.matrix() + target).norm();
        assert!(
            diff_plus.min(diff_minus) < 1e-10,
            "recovered {:?}",
            q.matrix()
        );
    }

    #[test]
    fn quadric_contains_generating_lines() {
        let mut rng = Rng::new(4);
        let (l1, l2, l3) = (
            ProjectiveLine::sample(&mut rng),
            ProjectiveLine::sample(&mut rng),
            ProjectiveLine::sample(&mut rng),
        );
        let q = quadric_through(&l1, &l2, &l3).unwrap();
        for line in [&l1, &l2, &l3] {
            for i in 0..20 {
                let t = -2.0 + 4.0 * f64::from(i) / 19.0;
                let p = line.point(1.0, t);
                let res = q.evaluate(&p) / p.norm_squared();
                assert!(res.abs() < 1e-8, "containment residual {res}");
            }
        }
    }

    #[test]
    fn quadric_system_rank_deficiency_is_exactly_one() {
        let mut rng = Rng::new(12);
        let mut a = DMatrix::<f64>::zeros(10, 10);
        for li in 0..3 {
            let line = ProjectiveLine::sample(&mut rng);
            for (pi, (s, t)) in [(1.0, 0.0), (1.0, 1.0), (1.0, -1.0)].iter().enumerate() {
                let row = monomial_row(&line.point(*s, *t));
                for (c, v) in row.iter().enumerate() {
                    a[(3 * li + pi, c)] = *v;
                }
            }
        }
        let sv = a.svd(false, false).singular_values;
        let mut s: Vec<f64> = sv.iter().cloned().collect();
        s.sort_by(|x, y| y.partial_cmp(x).unwrap());
        assert!(s[9] <= 1e-10 * s[0], "smallest {} largest {}", s[9], s[0]);
        assert!(s[8] > 1e-6 * s[0], "second smallest {}", s[8]);
    }

    #[test]
    fn secant_and_disjoint_lines_count_two_and_zero() {
        // Lines of the other ruling meet every ruling line: span{(1,0,t,0),(0,1,0,t)}.
        let l1 = ruling_line(0.0);
        let l2 = ruling_line(1.0);
        let l3 = ruling_line(-1.0);
        let q = quadric_through(&l1, &l2, &l3).unwrap();

        // A secant: passes through two points of the quadric, e.g. the
        // points (1,0,0,0) and (0,0,0,1) (both on x0 x3 = x1 x2).
        let mut m = Frame::zeros();
        m.set_column(0, &Vec4::new(1.0, 0.0, 0.0, 0.0));
        m.set_column(1, &Vec4::new(0.0, 0.0, 0.0, 1.0));
        let secant = ProjectiveLine::from_spanning(&m).unwrap();
        assert_eq!(count_meets_with_quadric(&q, &secant).unwrap(), 2);

        // A line with definite restricted form: points (1,0,0,1) and
        // (0,1,-1,0) give q(s,t) = s² + t² in the standard quadric (up to
        // overall sign), which has no real zeros.
        let mut m = Frame::zeros();
        m.set_column(0, &Vec4::new(1.0, 0.0, 0.0, 1.0));
        m.set_column(1, &Vec4::new(0.0, 1.0, -1.0, 0.0));
        let disjoint = ProjectiveLine::from_spanning(&m).unwrap();
        assert_eq!(count_meets_with_quadric(&q, &disjoint).unwrap(), 0);
    }

    #[test]
    fn counts_are_zero_or_two() {
        let mut rng = Rng::new(2025);
        let mut seen = [0u32; 3];
        for _ in 0..2_000 {
            let l1 = ProjectiveLine::sample(&mut rng);
            let l2 = ProjectiveLine::sample(&mut rng);
            let l3 = ProjectiveLine::sample(&mut rng);
            let l4 = ProjectiveLine::sample(&mut rng);
            match count_real_meets(&l1, &l2, &l3, &l4) {
                Ok(0) => seen[0] += 1,
                Ok(2) => seen[2] += 1,
                Ok(c) => panic!("impossible count {c}"),
                Err(Error::Degenerate(_)) => seen[1] += 1,
                Err(e) => panic!("{e}"),
            }
        }
        assert!(seen[0] > 0 && seen[2] > 0);
        assert!(seen[1] < 5, "degenerate rate too high: {seen:?}");
    }

    #[test]
    fn estimator_reproducible_and_near_target() {
        let a = estimate_delta13(60_000, 7).unwrap();
        let b = estimate_delta13(60_000, 7).unwrap();
        assert_eq!(a.estimate.mean.to_bits(), b.estimate.mean.to_bits());
        assert!(a.estimate.mean <= 2.0);
        // Loose 4-sigma guard around the known value.
        assert!(
            (a.estimate.mean - 1.7262).abs() < 4.0 * a.estimate.std_error,
            "mean {} +- {}",
            a.estimate.mean,
            a.estimate.std_error
        );
    }

    #[test]
    fn delta0_and_degenerate_flag() {
        assert_eq!(check_delta0(2, 1).unwrap(), 1);
        assert_eq!(check_delta0(5, 1).unwrap(), 1);
        // Duplicated hyperplane: rank deficiency is flagged.
        let mut m = DMatrix::<f64>::zeros(2, 3);
        for c in 0..3 {
            m[(0, c)] = c as f64 + 1.0;
            m[(1, c)] = (c as f64 + 1.0) * 2.0;
        }
        assert!(matches!(
            intersect_hyperplanes(&m),
            Err(Error::Degenerate(_))
        ));
    }
}
