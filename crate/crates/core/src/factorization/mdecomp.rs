use crate::error::Result;
use crate::linalg::{
    op_norm, psd_function, range_kernel, require_square, subspace_distance, subspace_ops, CMatrix,
    Subspace,
};
use crate::membership::is_l2p;
use crate::tol::Tolerances;

/// Decomposition along `M = ran T + ker T`.
#[derive(Debug, Clone)]
pub struct MDecomposition {
    pub m: Subspace,
    /// `T·P_M`.
    pub t_m: CMatrix,
    /// `T + P_{M⊥}·B` for an optimal pair `(A, B)` of `T`; absent when `T` is
    /// not a member.
    pub t_upper_m: Option<CMatrix>,
    /// `T·P_M` is a member and `ran T ⊆ ran(A·B^{1/2})` for its optimal pair.
    pub condition_ii: bool,
    /// Deviations from the structural identities of `T_M` and `T^M`, when a
    /// witness exists.
    pub certificates: Option<MCertificates>,
}

#[derive(Debug, Clone)]
pub struct MCertificates {
    /// Angle between `ran T_M` and `ran T`.
    pub range_t_m: f64,
    /// Angle between `ker T_M` and `ker T ⊕ M⊥`.
    pub kernel_t_m: f64,
    /// `‖T − P_M·T^M‖`.
    pub corner: f64,
    /// Angle between `ran T^M` and `ran T ⊕ M⊥`.
    pub range_t_upper: f64,
    /// Angle between `ker T^M` and `ker T`.
    pub kernel_t_upper: f64,
}

impl MCertificates {
    pub fn max_angle(&self) -> f64 {
        self.range_t_m
            .max(self.kernel_t_m)
            .max(self.range_t_upper)
            .max(self.kernel_t_upper)
    }
}

fn direct_sum(u: &Subspace, v: &Subspace, tol: &Tolerances) -> Result<Subspace> {
    Ok(subspace_ops(u, v, tol)?.sum)
}

pub fn m_decomposition(t: &CMatrix, tol: &Tolerances) -> Result<MDecomposition> {
    require_square(t)?;
    let (ran_t, ker_t) = range_kernel(t, tol);
    let m = direct_sum(&ran_t, &ker_t, tol)?;
    let p_m = m.projector();
    let m_perp = m.complement();
    let t_m = t * &p_m;
    let t_norm = op_norm(t);

    // Condition (ii): membership of T_M and ran T ⊆ ran(A·B^{1/2}).
    let condition_ii = match is_l2p(&t_m, tol)?.witness {
        Some(_) if t_norm == 0.0 => true,
        Some(w) => {
            let cut = tol.tol_rank * op_norm(&w.b);
            let root = psd_function(&w.b, tol, |v| if v > cut { v.sqrt() } else { 0.0 })?;
            let (ran_ab, _) = range_kernel(&(&w.a * root), tol);
            op_norm(&(t - ran_ab.projector() * t)) <= tol.tol_eq * t_norm
        }
        None => false,
    };

    let verdict = is_l2p(t, tol)?;
    let (t_upper_m, certificates) = match verdict.witness {
        Some(w) => {
            let upper = t + m_perp.projector() * &w.b;
            let (ran_tm, ker_tm) = range_kernel(&t_m, tol);
            let (ran_up, ker_up) = range_kernel(&upper, tol);
            let certs = MCertificates {
                range_t_m: subspace_distance(&ran_tm, &ran_t),
                kernel_t_m: subspace_distance(&ker_tm, &direct_sum(&ker_t, &m_perp, tol)?),
                corner: op_norm(&(t - &p_m * &upper)),
                range_t_upper: subspace_distance(&ran_up, &direct_sum(&ran_t, &m_perp, tol)?),
                kernel_t_upper: subspace_distance(&ker_up, &ker_t),
            };
            (Some(upper), Some(certs))
        }
        None => (None, None),
    };
    Ok(MDecomposition {
        m,
        t_m,
        t_upper_m,
        condition_ii,
        certificates,
    })
}
