//! Membership in the class of products of two positive semidefinite matrices.

use crate::error::{Error, Result};
use crate::factorization::{optimal_pair_from, Factorization};
use crate::linalg::{
    self, checked_hermitian, eigenbasis, op_norm, pinv, psd_pinv_sqrt, range_kernel, require_psd,
    require_square, CMatrix, SpectrumReport,
};
use crate::tol::Tolerances;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Subclass {
    /// Product of two orthoprojections.
    ProjProj,
    /// Positive matrix times an orthoprojection.
    PosProj,
    General,
    Outside,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Confidence {
    Firm,
    NearBoundary,
}

#[derive(Debug, Clone)]
pub struct MembershipVerdict {
    pub in_l2p: bool,
    pub subclass: Subclass,
    pub witness: Option<Factorization>,
    pub reason: String,
    pub confidence: Confidence,
    pub spectrum: SpectrumReport,
}

fn confidence_of(report: &SpectrumReport, tol: &Tolerances) -> Confidence {
    let cond = report.eigvec_cond;
    let near_cond = cond.is_finite() && cond >= tol.cond_max / 10.0 && cond <= tol.cond_max * 10.0;
    let defect = report.positivity_defect();
    let near_floor = defect >= tol.tol_psd / 10.0 && defect <= tol.tol_psd * 10.0;
    if near_cond || near_floor {
        Confidence::NearBoundary
    } else {
        Confidence::Firm
    }
}

/// Decides membership: diagonalizable with nonnegative spectrum. Members come
/// with an optimal pair as witness.
pub fn is_l2p(t: &CMatrix, tol: &Tolerances) -> Result<MembershipVerdict> {
    let n = require_square(t)?;
    linalg::check_finite(t)?;
    let basis = eigenbasis(t, tol)?;
    let report = basis.report.clone();
    let mut confidence = confidence_of(&report, tol);
    let geometric: usize = report.clusters.iter().map(|c| c.geometric_mult).sum();

    let outside = |reason: String, confidence| MembershipVerdict {
        in_l2p: false,
        subclass: Subclass::Outside,
        witness: None,
        reason,
        confidence,
        spectrum: report.clone(),
    };

    if !report.spectrum_nonneg {
        return Ok(outside(
            format!(
                "spectrum is not real and nonnegative (relative defect {:.3e})",
                report.positivity_defect()
            ),
            confidence,
        ));
    }
    if geometric < n {
        return Ok(outside(
            format!("not diagonalizable: {geometric} independent eigenvectors in dimension {n}"),
            confidence,
        ));
    }
    if !report.diagonalizable {
        return Ok(outside(
            format!(
                "eigenvector matrix condition {:.3e} exceeds {:.3e}",
                report.eigvec_cond, tol.cond_max
            ),
            Confidence::NearBoundary,
        ));
    }

    let witness = optimal_pair_from(t, &basis, tol)?;
    if witness.residual > tol.tol_eq * report.norm.max(f64::MIN_POSITIVE) {
        return Ok(outside(
            format!(
                "witness residual {:.3e} exceeds tolerance; spectrum looks admissible",
                witness.residual
            ),
            Confidence::NearBoundary,
        ));
    }
    if !witness.optimal {
        confidence = Confidence::NearBoundary;
    }
    Ok(MembershipVerdict {
        in_l2p: true,
        subclass: Subclass::General,
        witness: Some(witness),
        reason: "diagonalizable with nonnegative spectrum".into(),
        confidence,
        spectrum: report,
    })
}

/// Residual of the identity `T·Tᴴ·T = T²`, which characterises products of
/// two orthoprojections, together with the tolerance it is compared against.
/// The bound has an absolute floor at `tol_rank` so that numerically zero
/// matrices (products of orthogonal projections) pass.
pub fn proj_proj_residual(t: &CMatrix, tol: &Tolerances) -> (f64, f64) {
    let norm = op_norm(t);
    let residual = op_norm(&(t * t.adjoint() * t - t * t));
    (
        residual,
        tol.tol_eq * (norm * norm).max(tol.tol_rank) * norm.max(1.0),
    )
}

/// Refines [`is_l2p`] into the subclasses ProjProj ⊂ PosProj ⊂ General.
pub fn classify_subclass(t: &CMatrix, tol: &Tolerances) -> Result<MembershipVerdict> {
    let mut verdict = is_l2p(t, tol)?;
    let norm = op_norm(t);

    let (residual, allowed) = proj_proj_residual(t, tol);
    if residual <= allowed {
        let (range, _) = range_kernel(t, tol);
        let (co_range, _) = range_kernel(&t.adjoint(), tol);
        let witness = Factorization::certify(t, &range.projector(), &co_range.projector(), tol);
        verdict.subclass = Subclass::ProjProj;
        verdict.reason = format!("T·Tᴴ·T = T² holds (residual {residual:.3e})");
        if !verdict.in_l2p || witness.residual <= tol.tol_eq * norm.max(f64::MIN_POSITIVE) {
            verdict.in_l2p = true;
            verdict.witness = Some(witness);
        }
        return Ok(verdict);
    }

    if let Some(witness) = pos_proj_witness(t, tol)? {
        verdict.in_l2p = true;
        verdict.subclass = Subclass::PosProj;
        verdict.reason = "T = A·P with P the orthoprojection onto ran Tᴴ".into();
        verdict.witness = Some(witness);
        return Ok(verdict);
    }

    if verdict.in_l2p {
        verdict.subclass = Subclass::General;
    }
    Ok(verdict)
}

/// In coordinates ran Tᴴ ⊕ ker T, `T = [[T11, 0], [T21, 0]]`; it factors as
/// `A·P` exactly when `T11 ⪰ 0` and `ran T21ᴴ ⊆ ran T11`.
fn pos_proj_witness(t: &CMatrix, tol: &Tolerances) -> Result<Option<Factorization>> {
    let n = t.nrows();
    let norm = op_norm(t);
    if norm == 0.0 {
        return Ok(None);
    }
    let (co_range, _) = range_kernel(&t.adjoint(), tol);
    let r = &co_range.basis;
    let k = &range_kernel(t, tol).1.basis;
    if r.ncols() + k.ncols() != n {
        return Ok(None);
    }
    let t11 = r.adjoint() * t * r;
    let t21 = k.adjoint() * t * r;
    let a11 = match checked_hermitian(&t11, tol).and_then(|h| require_psd(&h, tol).map(|_| h)) {
        Ok(h) => h,
        Err(_) => return Ok(None),
    };
    // ran T21ᴴ ⊆ ran T11, checked via the projector onto ran T11.
    let p11 = &a11 * pinv(&a11, tol);
    let t12 = t21.adjoint();
    if op_norm(&(&t12 - &p11 * &t12)) > tol.tol_eq * norm {
        return Ok(None);
    }
    let a22 = &t21 * pinv(&a11, tol) * &t12;
    let mut w = CMatrix::zeros(n, n);
    w.columns_mut(0, r.ncols()).copy_from(r);
    w.columns_mut(r.ncols(), k.ncols()).copy_from(k);
    let a = &w * linalg::block2(&a11, &t12, &t21, &a22) * w.adjoint();
    let a = linalg::hermitian_part(&a);
    let witness = Factorization::certify(t, &a, &co_range.projector(), tol);
    if witness.residual > tol.tol_eq * norm {
        return Ok(None);
    }
    Ok(Some(witness))
}

/// Smallest `λ ≥ 0` with `T·Tᴴ ⪯ λ·A·Tᴴ`, the feasibility constant of the
/// equation `A·X = T` over positive `X`.
pub fn feasibility_lambda(a: &CMatrix, t: &CMatrix, tol: &Tolerances) -> Result<f64> {
    require_psd(a, tol)?;
    if a.nrows() != t.nrows() || t.nrows() != t.ncols() || a.ncols() != t.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "A is {}x{}, T is {}x{}",
            a.nrows(),
            a.ncols(),
            t.nrows(),
            t.ncols()
        )));
    }
    let t_norm = op_norm(t);
    if t_norm == 0.0 {
        return Ok(0.0);
    }
    let s = a * t.adjoint();
    let s = checked_hermitian(&s, tol)
        .map_err(|e| Error::Infeasible(format!("A·Tᴴ is not Hermitian ({e})")))?;
    if let Err(e) = require_psd(&s, tol) {
        return Err(Error::Infeasible(format!("A·Tᴴ is not positive ({e})")));
    }
    let (range, _) = range_kernel(&s, tol);
    let outside = op_norm(&(t - range.projector() * t));
    if outside > tol.tol_eq * t_norm {
        return Err(Error::Infeasible(format!(
            "ran T is not contained in ran A·Tᴴ (defect {outside:.3e})"
        )));
    }
    let m = t * t.adjoint();
    let w = psd_pinv_sqrt(&s, tol)?;
    let pencil = &w * m * &w;
    let lambda = pencil.symmetric_eigenvalues().max();
    Ok(lambda.max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{dist, identity, real_diag, real_matrix};

    #[test]
    fn nilpotent_is_outside() {
        let v = is_l2p(
            &real_matrix(2, 2, &[0.0, 1.0, 0.0, 0.0]),
            &Tolerances::default(),
        )
        .unwrap();
        assert!(!v.in_l2p);
        assert_eq!(v.subclass, Subclass::Outside);
        assert_eq!(v.confidence, Confidence::Firm);
    }

    #[test]
    fn negative_eigenvalue_is_outside() {
        let v = is_l2p(&real_diag(&[-1.0, 2.0]), &Tolerances::default()).unwrap();
        assert!(!v.in_l2p);
    }

    #[test]
    fn oblique_projection_is_member() {
        let t = real_matrix(2, 2, &[1.0, 1.0, 0.0, 0.0]);
        let v = is_l2p(&t, &Tolerances::default()).unwrap();
        assert!(v.in_l2p);
        let w = v.witness.unwrap();
        assert!(dist(&w.a, &real_diag(&[1.0, 0.0])) < 1e-12);
        assert!(dist(&w.b, &real_matrix(2, 2, &[1.0, 1.0, 1.0, 1.0])) < 1e-12);
        assert!(w.optimal);
    }

    #[test]
    fn subclasses() {
        let tol = Tolerances::default();
        let v = classify_subclass(&real_diag(&[1.0, 0.0]), &tol).unwrap();
        assert_eq!(v.subclass, Subclass::ProjProj);

        let q = real_matrix(2, 2, &[1.0, 1.0, 0.0, 0.0]);
        assert_eq!(
            classify_subclass(&q, &tol).unwrap().subclass,
            Subclass::PosProj
        );
        // Qᴴ = [[1,1],[1,1]]·diag(1,0).
        let adj = classify_subclass(&q.adjoint(), &tol).unwrap();
        assert_eq!(adj.subclass, Subclass::PosProj);
        assert!(
            dist(
                &adj.witness.unwrap().a,
                &real_matrix(2, 2, &[1.0, 1.0, 1.0, 1.0])
            ) < 1e-12
        );
        assert_eq!(
            classify_subclass(&real_diag(&[2.0, 3.0]), &tol)
                .unwrap()
                .subclass,
            Subclass::PosProj
        );
        assert_eq!(
            classify_subclass(&real_matrix(2, 2, &[0.0, 1.0, 0.0, 0.0]), &tol)
                .unwrap()
                .subclass,
            Subclass::Outside
        );
    }

    #[test]
    fn feasibility_examples() {
        let tol = Tolerances::default();
        let a = real_diag(&[1.0, 0.0]);
        let t = real_matrix(2, 2, &[1.0, 1.0, 0.0, 0.0]);
        assert!((feasibility_lambda(&a, &t, &tol).unwrap() - 2.0).abs() < 1e-12);
        assert!(
            (feasibility_lambda(&identity(2), &identity(2), &tol).unwrap() - 1.0).abs() < 1e-12
        );
        assert!(matches!(
            feasibility_lambda(&a, &real_diag(&[0.0, 1.0]), &tol),
            Err(Error::Infeasible(_))
        ));
        assert!(matches!(
            feasibility_lambda(&real_diag(&[-1.0, 1.0]), &identity(2), &tol),
            Err(Error::NotPsd { .. })
        ));
    }
}
