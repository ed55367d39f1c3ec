use super::{cis, CMatrix, RandomSource, C64};
use crate::{Error, Result};

/// Nearest unitary in Frobenius norm, `W·V†` from the SVD `M = W Σ V†`.
pub fn polar_unitary(m: &CMatrix) -> Result<CMatrix> {
    if !m.is_square() {
        return Err(Error::Dimension(format!("polar decomposition of a {}x{} matrix", m.nrows(), m.ncols())));
    }
    let svd = m.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if !(smin > 1e-12 * smax.max(f64::MIN_POSITIVE)) {
        return Err(Error::Singular(format!("singular values span {smin:e}..{smax:e}")));
    }
    let (u, v_t) = (svd.u.expect("requested"), svd.v_t.expect("requested"));
    Ok(u * v_t)
}

fn check_same(u: &CMatrix, v: &CMatrix) -> Result<usize> {
    if !u.is_square() || u.shape() != v.shape() {
        return Err(Error::Dimension(format!("fidelity between {:?} and {:?}", u.shape(), v.shape())));
    }
    Ok(u.nrows())
}

/// `|Tr(U†V)| / m`.
pub fn gate_fidelity(u: &CMatrix, v: &CMatrix) -> Result<f64> {
    let m = check_same(u, v)?;
    let tr: C64 = u.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
    Ok(tr.norm() / m as f64)
}

const RESTARTS: usize = 8;
const TOL: f64 = 1e-9;
const MAX_SWEEPS: usize = 10_000;

/// Gate fidelity maximized over `D₁·W·D₂`, with `D₁`, `D₂` diagonal phase
/// matrices and `W ∈ {V, conj(V)}`.
///
/// Alternating ascent: with one side fixed, the optimal phases on the other
/// side align every partial trace with the real axis in closed form.
pub fn max_gate_fidelity(u: &CMatrix, v: &CMatrix) -> Result<f64> {
    let m = check_same(u, v)?;
    let mut rng = RandomSource::new(0x6d61_7866_6964);
    let mut best = 0.0f64;
    for w in [v.clone(), v.map(|z| z.conj())] {
        // k_ij = conj(u_ij)·w_ij; objective |Σ d1_i k_ij d2_j| / m
        let k = CMatrix::from_fn(m, m, |i, j| u[(i, j)].conj() * w[(i, j)]);
        for start in 0..RESTARTS {
            let mut d2: Vec<C64> = if start == 0 {
                vec![C64::new(1.0, 0.0); m]
            } else {
                (0..m).map(|_| cis(2.0 * std::f64::consts::PI * rng.uniform())).collect()
            };
            let mut d1 = vec![C64::new(1.0, 0.0); m];
            let mut prev = -1.0;
            for _ in 0..MAX_SWEEPS {
                for i in 0..m {
                    let a: C64 = (0..m).map(|j| k[(i, j)] * d2[j]).sum();
                    d1[i] = unit_conj(a);
                }
                for j in 0..m {
                    let b: C64 = (0..m).map(|i| d1[i] * k[(i, j)]).sum();
                    d2[j] = unit_conj(b);
                }
                let f = objective(&k, &d1, &d2) / m as f64;
                if f - prev < TOL {
                    prev = prev.max(f);
                    break;
                }
                prev = f;
            }
            best = best.max(prev);
        }
    }
    Ok(best.min(1.0))
}

fn unit_conj(z: C64) -> C64 {
    let r = z.norm();
    if r > 0.0 {
        z.conj() / r
    } else {
        C64::new(1.0, 0.0)
    }
}

fn objective(k: &CMatrix, d1: &[C64], d2: &[C64]) -> f64 {
    let mut s = C64::new(0.0, 0.0);
    for i in 0..d1.len() {
        for j in 0..d2.len() {
            s += d1[i] * k[(i, j)] * d2[j];
        }
    }
    s.norm()
}

/// `½ Σ |p_x − q_x|` over a shared, identically ordered sample space.
pub fn total_variation_distance(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::Dimension(format!("sample spaces of size {} and {}", p.len(), q.len())));
    }
    Ok(0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>())
}
