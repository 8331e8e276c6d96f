use crate::error::{Error, Result};
use crate::factorization::{pair_leq, Factorization, PairOrder};
use crate::linalg::{
    condition_number, inverse, op_norm, range_kernel, real_diag, real_matrix, subspace_distance,
    CMatrix, Subspace,
};
use crate::membership::is_l2p;
use crate::tol::{Tolerances, TOL_ANGLE};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GalleryName {
    ObliqueProjection,
    ThreePositiveNilpotent,
    NonuniqueMinimal,
}

impl GalleryName {
    pub const ALL: [GalleryName; 3] = [
        GalleryName::ObliqueProjection,
        GalleryName::ThreePositiveNilpotent,
        GalleryName::NonuniqueMinimal,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            GalleryName::ObliqueProjection => "oblique_projection",
            GalleryName::ThreePositiveNilpotent => "three_positive_nilpotent",
            GalleryName::NonuniqueMinimal => "nonunique_minimal",
        }
    }
}

impl fmt::Display for GalleryName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GalleryName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GalleryName::ALL
            .into_iter()
            .find(|g| g.as_str() == s)
            .ok_or_else(|| Error::UnknownName(s.into()))
    }
}

#[derive(Debug, Clone, Default)]
pub struct GalleryParams {
    /// Basis of the range (oblique projection). Defaults to `e₁` in `C²`.
    pub range: Option<CMatrix>,
    /// Basis of the kernel (oblique projection). Defaults to `(1, −1)`.
    pub kernel: Option<CMatrix>,
    /// Ratio `R` of the non-unique minimal pairs. Defaults to 2.
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct GalleryItem {
    pub name: GalleryName,
    pub matrix: CMatrix,
    /// Named factors exhibiting the construction.
    pub factors: Vec<(String, CMatrix)>,
    /// `(property, holds)` for every declared certificate.
    pub certificates: Vec<(String, bool)>,
}

impl GalleryItem {
    pub fn certified(&self) -> bool {
        self.certificates.iter().all(|c| c.1)
    }
}

pub fn gallery(name: GalleryName, params: &GalleryParams, tol: &Tolerances) -> Result<GalleryItem> {
    match name {
        GalleryName::ObliqueProjection => oblique_projection(params, tol),
        GalleryName::ThreePositiveNilpotent => three_positive_nilpotent(tol),
        GalleryName::NonuniqueMinimal => nonunique_minimal(params, tol),
    }
}

/// `Q = W·diag(1, 0)·W⁻¹` with `W = [M | N]`, the idempotent with range `M`
/// and kernel `N`. Witness `(P_M, QᴴQ)`.
fn oblique_projection(params: &GalleryParams, tol: &Tolerances) -> Result<GalleryItem> {
    let m = params
        .range
        .clone()
        .unwrap_or_else(|| real_matrix(2, 1, &[1.0, 0.0]));
    let n = params
        .kernel
        .clone()
        .unwrap_or_else(|| real_matrix(2, 1, &[1.0, -1.0]));
    let dim = m.nrows();
    if n.nrows() != dim || m.ncols() + n.ncols() != dim {
        return Err(Error::InvalidParams(format!(
            "range ({}x{}) and kernel ({}x{}) bases must split C^{dim}",
            m.nrows(),
            m.ncols(),
            n.nrows(),
            n.ncols()
        )));
    }
    let mut w = CMatrix::zeros(dim, dim);
    w.columns_mut(0, m.ncols()).copy_from(&m);
    w.columns_mut(m.ncols(), n.ncols()).copy_from(&n);
    if !(condition_number(&w) <= tol.cond_max) {
        return Err(Error::InvalidParams(
            "range and kernel are not complementary".into(),
        ));
    }
    let mut select = CMatrix::zeros(dim, dim);
    select
        .view_mut((0, 0), (m.ncols(), m.ncols()))
        .fill_with_identity();
    let q = &w * select * inverse(&w)?;

    let norm = op_norm(&q).max(1.0);
    let (ran, ker) = range_kernel(&q, tol);
    let range = Subspace::span(&m, tol);
    let kernel = Subspace::span(&n, tol);
    let a = range.projector();
    let b = q.adjoint() * &q;
    let witness = Factorization::certify(&q, &a, &b, tol);
    let verdict = is_l2p(&q, tol)?;
    let certificates = vec![
        (
            "idempotent".into(),
            op_norm(&(&q * &q - &q)) <= tol.tol_eq * norm,
        ),
        ("range".into(), subspace_distance(&ran, &range) <= TOL_ANGLE),
        (
            "kernel".into(),
            subspace_distance(&ker, &kernel) <= TOL_ANGLE,
        ),
        ("in_l2p".into(), verdict.in_l2p),
        ("witness".into(), witness.residual <= tol.tol_eq * norm),
    ];
    Ok(GalleryItem {
        name: GalleryName::ObliqueProjection,
        matrix: q,
        factors: vec![("A".into(), a), ("B".into(), b)],
        certificates,
    })
}

/// `[[0, 1], [0, 0]] = diag(1, 0) · [[1, 1], [1, 1]] · diag(0, 1)`: a product of
/// three positives that is not a product of two.
fn three_positive_nilpotent(tol: &Tolerances) -> Result<GalleryItem> {
    let p = real_diag(&[1.0, 0.0]);
    let j = real_matrix(2, 2, &[1.0, 1.0, 1.0, 1.0]);
    let r = real_diag(&[0.0, 1.0]);
    let t = &p * &j * &r;
    let verdict = is_l2p(&t, tol)?;
    let expected = real_matrix(2, 2, &[0.0, 1.0, 0.0, 0.0]);
    Ok(GalleryItem {
        name: GalleryName::ThreePositiveNilpotent,
        certificates: vec![
            ("exact_product".into(), t == expected),
            ("not_in_l2p".into(), !verdict.in_l2p),
        ],
        matrix: t,
        factors: vec![("P1".into(), p), ("P2".into(), j), ("P3".into(), r)],
    })
}

/// `T = diag(R, 1/R)` with the incomparable pairs `(diag(R, 1), diag(1, 1/R))`
/// and `(diag(1, 1/R), diag(R, 1))`.
fn nonunique_minimal(params: &GalleryParams, tol: &Tolerances) -> Result<GalleryItem> {
    let r = params.ratio.unwrap_or(2.0);
    if !(r.is_finite() && r > 0.0) || r == 1.0 {
        return Err(Error::InvalidParams(format!(
            "ratio must be positive and different from 1, got {r}"
        )));
    }
    let t = real_diag(&[r, 1.0 / r]);
    let big = real_diag(&[r, 1.0]);
    let small = real_diag(&[1.0, 1.0 / r]);
    let first = Factorization::certify(&t, &big, &small, tol);
    let second = Factorization::certify(&t, &small, &big, tol);
    let order = pair_leq(&first, &second, tol)?;
    let norm = op_norm(&t);
    Ok(GalleryItem {
        name: GalleryName::NonuniqueMinimal,
        certificates: vec![
            ("first_pair".into(), first.residual <= tol.tol_eq * norm),
            ("second_pair".into(), second.residual <= tol.tol_eq * norm),
            ("incomparable".into(), order == PairOrder::Incomparable),
        ],
        matrix: t,
        factors: vec![
            ("A1".into(), big.clone()),
            ("B1".into(), small.clone()),
            ("A2".into(), small),
            ("B2".into(), big),
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{dist, identity};

    #[test]
    fn every_default_item_is_certified() {
        let tol = Tolerances::default();
        for name in GalleryName::ALL {
            let item = gallery(name, &GalleryParams::default(), &tol).unwrap();
            assert!(item.certified(), "{name}: {:?}", item.certificates);
        }
    }

    #[test]
    fn default_oblique_projection() {
        let tol = Tolerances::default();
        let item = gallery(
            GalleryName::ObliqueProjection,
            &GalleryParams::default(),
            &tol,
        )
        .unwrap();
        assert!(dist(&item.matrix, &real_matrix(2, 2, &[1.0, 1.0, 0.0, 0.0])) < 1e-15);
    }

    #[test]
    fn names_and_params() {
        let tol = Tolerances::default();
        assert!(matches!(
            "nope".parse::<GalleryName>(),
            Err(Error::UnknownName(_))
        ));
        assert_eq!(
            "nonunique_minimal".parse::<GalleryName>().unwrap(),
            GalleryName::NonuniqueMinimal
        );
        let bad = GalleryParams {
            ratio: Some(1.0),
            ..Default::default()
        };
        assert!(gallery(GalleryName::NonuniqueMinimal, &bad, &tol).is_err());
        let dependent = GalleryParams {
            range: Some(real_matrix(2, 1, &[1.0, 0.0])),
            kernel: Some(real_matrix(2, 1, &[2.0, 0.0])),
            ratio: None,
        };
        assert!(gallery(GalleryName::ObliqueProjection, &dependent, &tol).is_err());
        let three = GalleryParams {
            range: Some(identity(3).columns(0, 2).into_owned()),
            kernel: Some(real_matrix(3, 1, &[1.0, 1.0, 1.0])),
            ratio: None,
        };
        let item = gallery(GalleryName::ObliqueProjection, &three, &tol).unwrap();
        assert!(item.certified());
    }
}
