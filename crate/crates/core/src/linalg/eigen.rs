use super::{c, fix_phases, full_svd, op_norm, range_kernel, require_square, CMatrix, C64};
use crate::error::{Error, Result};
use crate::tol::Tolerances;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenCluster {
    pub eigenvalue: C64,
    pub algebraic_mult: usize,
    pub geometric_mult: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub clusters: Vec<EigenCluster>,
    pub eigvec_cond: f64,
    pub diagonalizable: bool,
    pub spectrum_nonneg: bool,
    /// Spectral norm of the analysed matrix, the scale of every relative test.
    pub norm: f64,
}

impl SpectrumReport {
    pub fn dim(&self) -> usize {
        self.clusters.iter().map(|c| c.algebraic_mult).sum()
    }

    /// Most negative real part, or largest imaginary part, relative to the
    /// norm. Zero when the spectrum is comfortably nonnegative.
    pub fn positivity_defect(&self) -> f64 {
        if self.norm == 0.0 {
            return 0.0;
        }
        self.clusters
            .iter()
            .map(|c| (-c.eigenvalue.re).max(c.eigenvalue.im.abs()).max(0.0))
            .fold(0.0, f64::max)
            / self.norm
    }
}

/// Eigenvectors grouped by cluster.
///
/// `vectors` has one unit column per eigenvector found; it is square exactly
/// when the geometric multiplicities add up to the dimension.
#[derive(Debug, Clone)]
pub struct Eigenbasis {
    pub vectors: CMatrix,
    /// Cluster eigenvalue attached to each column of `vectors`.
    pub values: Vec<C64>,
    pub report: SpectrumReport,
}

/// Eigendecomposition of the Hermitian part of `m`: ascending eigenvalues and
/// a unitary matrix of eigenvectors.
pub fn eig_hermitian(m: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    let n = require_square(m)?;
    if n == 0 {
        return Ok((Vec::new(), CMatrix::zeros(0, 0)));
    }
    let h = super::hermitian_part(m);
    let eig = h
        .try_symmetric_eigen(f64::EPSILON, 10_000 * n)
        .ok_or(Error::NoConvergence("Hermitian eigensolver"))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vecs = CMatrix::from_fn(n, n, |r, k| eig.eigenvectors[(r, order[k])]);
    fix_phases(&mut vecs);
    Ok((values, vecs))
}

/// Eigenvalues of a general square matrix (Hessenberg QR through `faer`).
fn general_eigenvalues(t: &CMatrix) -> Result<Vec<C64>> {
    if op_norm(t) == 0.0 {
        return Ok(vec![C64::new(0.0, 0.0); t.nrows()]);
    }
    super::to_faer(t)
        .eigenvalues()
        .map_err(|_| Error::NoConvergence("eigenvalue iteration"))
}

/// Single-linkage clustering; groups come back ordered by their mean
/// (real part first, then imaginary part).
pub(crate) fn cluster(values: &[C64], width: f64) -> Vec<Vec<usize>> {
    let n = values.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if (values[i] - values[j]).norm() <= width {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_index = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if root_index[r] == usize::MAX {
            root_index[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[root_index[r]].push(i);
    }
    let mean = |g: &Vec<usize>| g.iter().map(|&i| values[i]).sum::<C64>() / g.len() as f64;
    groups.sort_by(|a, b| {
        let (ma, mb) = (mean(a), mean(b));
        ma.re.total_cmp(&mb.re).then(ma.im.total_cmp(&mb.im))
    });
    groups
}

fn mean_of(values: &[C64], group: &[usize]) -> C64 {
    group.iter().map(|&i| values[i]).sum::<C64>() / group.len() as f64
}

fn column_condition(g: &CMatrix) -> f64 {
    if g.ncols() == 0 {
        return 1.0;
    }
    super::condition_number(g)
}

fn nonneg(clusters: &[EigenCluster], norm: f64, tol: &Tolerances) -> bool {
    let floor = tol.tol_psd * norm;
    clusters
        .iter()
        .all(|c| c.eigenvalue.re >= -floor && c.eigenvalue.im.abs() <= floor)
}

fn full_eigenbasis(t: &CMatrix, tol: &Tolerances) -> Result<Eigenbasis> {
    let n = require_square(t)?;
    let norm = op_norm(t);
    let eigs = general_eigenvalues(t)?;
    let groups = cluster(&eigs, tol.tol_cluster * norm);

    let mut clusters = Vec::with_capacity(groups.len());
    let mut columns: Vec<CMatrix> = Vec::new();
    let mut values = Vec::new();
    for g in &groups {
        let mean = mean_of(&eigs, g);
        let spread = g
            .iter()
            .map(|&i| (eigs[i] - mean).norm())
            .fold(0.0, f64::max);
        let mut shifted = t.clone();
        for i in 0..n {
            shifted[(i, i)] -= mean;
        }
        let svd = full_svd(&shifted);
        let cut = tol.tol_rank * norm + spread;
        let geom = svd.sigma.iter().filter(|&&s| s <= cut).count().min(g.len());
        let mut basis = svd.v.columns(n - geom, geom).into_owned();
        fix_phases(&mut basis);
        values.extend(std::iter::repeat(mean).take(geom));
        columns.push(basis);
        clusters.push(EigenCluster {
            eigenvalue: mean,
            algebraic_mult: g.len(),
            geometric_mult: geom,
        });
    }

    let k = values.len();
    let mut vectors = CMatrix::zeros(n, k);
    let mut at = 0;
    for b in &columns {
        vectors.columns_mut(at, b.ncols()).copy_from(b);
        at += b.ncols();
    }
    let eigvec_cond = column_condition(&vectors);
    let spectrum_nonneg = nonneg(&clusters, norm, tol);
    Ok(Eigenbasis {
        report: SpectrumReport {
            diagonalizable: k == n && eigvec_cond <= tol.cond_max,
            clusters,
            eigvec_cond,
            spectrum_nonneg,
            norm,
        },
        vectors,
        values,
    })
}

/// Clustered spectrum, multiplicities and the diagonalizability and
/// positivity verdicts of a square matrix.
pub fn eig_general(t: &CMatrix, tol: &Tolerances) -> Result<SpectrumReport> {
    Ok(full_eigenbasis(t, tol)?.report)
}

/// Eigenvector matrix with unit columns, grouped by cluster in ascending
/// order of the cluster eigenvalues.
pub fn eigenbasis(t: &CMatrix, tol: &Tolerances) -> Result<Eigenbasis> {
    full_eigenbasis(t, tol)
}

/// Eigenbasis assembled from the restriction of `t` to its range plus an
/// orthonormal kernel basis.
///
/// When the range is invariant and the restricted operator is Hermitian (for
/// instance products of two orthoprojections) this keeps the range block
/// orthonormal, so the condition number reflects only the angle between the
/// range eigenvectors and the kernel.
pub fn split_eigenbasis(t: &CMatrix, tol: &Tolerances) -> Result<Eigenbasis> {
    let n = require_square(t)?;
    let norm = op_norm(t);
    let (range, kernel) = range_kernel(t, tol);
    let r = &range.basis;
    let k = &kernel.basis;
    let restricted = r.adjoint() * t * r;

    let (range_vectors, range_values, range_eigs) = if restricted.ncols() == 0 {
        (CMatrix::zeros(n, 0), Vec::new(), Vec::new())
    } else {
        let asym = op_norm(&(&restricted - restricted.adjoint()));
        if asym <= tol.tol_eq * op_norm(&restricted) {
            let (vals, vecs) = eig_hermitian(&restricted)?;
            let vals: Vec<C64> = vals.into_iter().map(c).collect();
            (r * vecs, vals.clone(), vals)
        } else {
            let sub = full_eigenbasis(&restricted, tol)?;
            let eigs = sub
                .report
                .clusters
                .iter()
                .flat_map(|cl| std::iter::repeat(cl.eigenvalue).take(cl.algebraic_mult))
                .collect();
            (r * sub.vectors, sub.values, eigs)
        }
    };

    let mut vectors = CMatrix::zeros(n, range_vectors.ncols() + k.ncols());
    vectors
        .columns_mut(0, range_vectors.ncols())
        .copy_from(&range_vectors);
    vectors
        .columns_mut(range_vectors.ncols(), k.ncols())
        .copy_from(k);
    for j in 0..vectors.ncols() {
        let len = vectors.column(j).norm();
        if len > 0.0 {
            vectors.column_mut(j).iter_mut().for_each(|z| *z /= len);
        }
    }
    fix_phases(&mut vectors);

    let mut values = range_values;
    values.extend(std::iter::repeat(C64::new(0.0, 0.0)).take(k.ncols()));
    let mut eigs = range_eigs;
    eigs.extend(std::iter::repeat(C64::new(0.0, 0.0)).take(k.ncols()));

    let groups = cluster(&eigs, tol.tol_cluster * norm);
    let means: Vec<C64> = groups.iter().map(|g| mean_of(&eigs, g)).collect();
    let mut geom = vec![0usize; groups.len()];
    for v in &values {
        let nearest = (0..means.len())
            .min_by(|&a, &b| (means[a] - v).norm().total_cmp(&(means[b] - v).norm()))
            .expect("at least one cluster");
        geom[nearest] += 1;
    }
    let clusters: Vec<EigenCluster> = groups
        .iter()
        .zip(&means)
        .zip(&geom)
        .map(|((g, &m), &gm)| EigenCluster {
            eigenvalue: m,
            algebraic_mult: g.len(),
            geometric_mult: gm.min(g.len()),
        })
        .collect();
    let eigvec_cond = column_condition(&vectors);
    let spectrum_nonneg = nonneg(&clusters, norm, tol);
    Ok(Eigenbasis {
        report: SpectrumReport {
            diagonalizable: vectors.ncols() == n && eigvec_cond <= tol.cond_max,
            clusters,
            eigvec_cond,
            spectrum_nonneg,
            norm,
        },
        vectors,
        values,
    })
}
