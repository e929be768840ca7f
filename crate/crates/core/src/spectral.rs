//! Laplacian spectrum, Cheeger sweep cuts and exhaustive expansion.
//!
//! `lambda2` runs a shifted block power iteration on `c·I − L` (with
//! `c = 2·max_degree`, so the shifted operator is positive semidefinite)
//! restricted to the complement of the all-ones vector, with a Rayleigh–Ritz
//! step every few sweeps. The smallest Ritz pair is accepted once its
//! residual `|L f − λ f|` drops below `tol·|f|`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use thiserror::Error;

use crate::exec::Exec;
use crate::graph::{Cut, Graph};
use crate::Rational;

pub const DEFAULT_TOL: f64 = 1e-8;
pub const MAX_SWEEPS: usize = 100_000;
/// Largest graph accepted by [`exact_expansion`].
pub const EXACT_MAX_N: usize = 22;

const BLOCK: usize = 12;
const RITZ_EVERY: usize = 4;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("graph is disconnected ({components} components)")]
    Disconnected { components: usize },
    #[error("graph needs at least two vertices")]
    TooSmall,
    #[error("no convergence after {sweeps} sweeps (residual {residual:e})")]
    NonConvergence { sweeps: usize, residual: f64 },
    #[error("exhaustive expansion limited to n <= {EXACT_MAX_N}, got {0}")]
    TooLarge(usize),
    #[error("tolerance must be positive")]
    BadTolerance,
}

/// Second-smallest Laplacian eigenvalue with an eigenvector.
#[derive(Debug, Clone)]
pub struct SpectralResult {
    pub lambda2: f64,
    pub fiedler: Vec<f64>,
    pub residual: f64,
}

fn laplacian_apply(g: &Graph, x: &[f64], out: &mut [f64]) {
    for v in 0..g.n() {
        let nb = g.neighbors(v);
        let mut s = nb.len() as f64 * x[v];
        for &w in nb {
            s -= x[w];
        }
        out[v] = s;
    }
}

fn remove_mean(x: &mut [f64]) {
    let mean = x.iter().sum::<f64>() / x.len() as f64;
    x.iter_mut().for_each(|v| *v -= mean);
}

/// Modified Gram–Schmidt on the columns; degenerate columns are re-seeded.
fn orthonormalize(cols: &mut [Vec<f64>], reseed: &mut u64) {
    for j in 0..cols.len() {
        for _attempt in 0..4 {
            remove_mean(&mut cols[j]);
            for i in 0..j {
                let (head, tail) = cols.split_at_mut(j);
                let dot: f64 = head[i].iter().zip(tail[0].iter()).map(|(a, b)| a * b).sum();
                tail[0].iter_mut().zip(head[i].iter()).for_each(|(b, a)| *b -= dot * a);
            }
            let norm = cols[j].iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm > 1e-10 {
                cols[j].iter_mut().for_each(|v| *v /= norm);
                break;
            }
            for v in cols[j].iter_mut() {
                *v = pseudo_random(reseed);
            }
        }
    }
}

fn pseudo_random(state: &mut u64) -> f64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^= z >> 31;
    (z >> 11) as f64 / (1u64 << 53) as f64 - 0.5
}

fn check_connected(g: &Graph) -> Result<(), SpectralError> {
    if g.n() < 2 {
        return Err(SpectralError::TooSmall);
    }
    let comps = g.components().len();
    if comps > 1 {
        return Err(SpectralError::Disconnected { components: comps });
    }
    Ok(())
}

/// `λ(G)` and a Fiedler vector of a connected graph.
pub fn lambda2(g: &Graph, tol: f64) -> Result<SpectralResult, SpectralError> {
    if !(tol > 0.0) {
        return Err(SpectralError::BadTolerance);
    }
    check_connected(g)?;
    let n = g.n();
    let k = BLOCK.min(n - 1);
    let shift = 2.0 * g.max_degree() as f64;
    let mut state = 0x5eed_u64;
    let mut cols: Vec<Vec<f64>> = (0..k)
        .map(|_| (0..n).map(|_| pseudo_random(&mut state)).collect())
        .collect();
    orthonormalize(&mut cols, &mut state);

    let mut scratch = vec![0.0; n];
    let mut last_residual = f64::INFINITY;
    for sweep in 1..=MAX_SWEEPS {
        for col in cols.iter_mut() {
            laplacian_apply(g, col, &mut scratch);
            for (c, l) in col.iter_mut().zip(scratch.iter()) {
                *c = shift * *c - l;
            }
        }
        orthonormalize(&mut cols, &mut state);
        if sweep % RITZ_EVERY != 0 && sweep != 1 {
            continue;
        }
        // Rayleigh–Ritz on span(cols).
        let lcols: Vec<Vec<f64>> = cols
            .iter()
            .map(|c| {
                let mut out = vec![0.0; n];
                laplacian_apply(g, c, &mut out);
                out
            })
            .collect();
        let t = DMatrix::from_fn(k, k, |i, j| {
            cols[i].iter().zip(lcols[j].iter()).map(|(a, b)| a * b).sum::<f64>()
        });
        let t = (&t + t.transpose()) * 0.5;
        let eig = SymmetricEigen::new(t);
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let rotated: Vec<Vec<f64>> = order
            .iter()
            .map(|&c| {
                let mut v = vec![0.0; n];
                for (i, col) in cols.iter().enumerate() {
                    let w = eig.eigenvectors[(i, c)];
                    v.iter_mut().zip(col.iter()).for_each(|(a, b)| *a += w * b);
                }
                v
            })
            .collect();
        cols = rotated;
        orthonormalize(&mut cols, &mut state);
        let f = &cols[0];
        laplacian_apply(g, f, &mut scratch);
        let lam: f64 = f.iter().zip(scratch.iter()).map(|(a, b)| a * b).sum();
        let residual = f
            .iter()
            .zip(scratch.iter())
            .map(|(a, b)| (b - lam * a).powi(2))
            .sum::<f64>()
            .sqrt();
        last_residual = residual;
        if residual <= tol {
            return Ok(SpectralResult {
                lambda2: lam.max(0.0),
                fiedler: f.clone(),
                residual,
            });
        }
    }
    Err(SpectralError::NonConvergence {
        sweeps: MAX_SWEEPS,
        residual: last_residual,
    })
}

/// Dense symmetric eigendecomposition of the Laplacian; used as a reference.
pub fn dense_laplacian_spectrum(g: &Graph) -> Vec<f64> {
    let n = g.n();
    let mut l = DMatrix::<f64>::zeros(n, n);
    for v in 0..n {
        l[(v, v)] = g.degree(v) as f64;
        for &w in g.neighbors(v) {
            l[(v, w)] = -1.0;
        }
    }
    let mut vals: Vec<f64> = SymmetricEigen::new(l).eigenvalues.iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    vals
}

/// Best prefix cut of the vertex order `order`.
pub fn best_prefix_cut(g: &Graph, order: &[usize]) -> Cut {
    let n = g.n();
    let mut in_prefix = vec![false; n];
    let mut crossing: i64 = 0;
    let mut best: Option<(Rational, usize)> = None;
    for (k, &v) in order.iter().enumerate().take(n - 1) {
        let inside = g.neighbors(v).iter().filter(|&&w| in_prefix[w]).count() as i64;
        crossing += g.degree(v) as i64 - 2 * inside;
        in_prefix[v] = true;
        let size = (k + 1).min(n - k - 1) as i64;
        let s = Rational::new(crossing, size);
        if best.is_none_or(|(b, _)| s < b) {
            best = Some((s, k + 1));
        }
    }
    let (_, len) = best.expect("n >= 2");
    Cut::new(g, &order[..len]).expect("proper prefix")
}

/// Cheeger rounding of the Fiedler vector: sort by value (ties by index) and
/// take the sparsest prefix.
pub fn sweep_cut(g: &Graph, tol: f64) -> Result<Cut, SpectralError> {
    let res = lambda2(g, tol)?;
    Ok(sweep_from_vector(g, &res.fiedler))
}

pub fn sweep_from_vector(g: &Graph, x: &[f64]) -> Cut {
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.sort_by(|&a, &b| x[a].total_cmp(&x[b]).then(a.cmp(&b)));
    best_prefix_cut(g, &order)
}

/// Minimum sparsity over all cuts, by enumeration of `2^(n-1)` bipartitions.
pub fn exact_expansion(g: &Graph) -> Result<(Rational, Cut), SpectralError> {
    exact_expansion_with(g, Exec::default())
}

pub fn exact_expansion_with(g: &Graph, exec: Exec) -> Result<(Rational, Cut), SpectralError> {
    let n = g.n();
    if n < 2 {
        return Err(SpectralError::TooSmall);
    }
    if n > EXACT_MAX_N {
        return Err(SpectralError::TooLarge(n));
    }
    // Vertex n-1 always sits on side B; masks range over vertices 0..n-1.
    let free = n - 1;
    let nbr_masks: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | (1 << w)))
        .collect();
    let high_bits = free.min(6);
    let low_bits = free - high_bits;
    let chunks = 1usize << high_bits;

    let per_chunk = exec.map_range(chunks, |hi| {
        let base = (hi as u32) << low_bits;
        let mut mask = base;
        let mut crossing: i64 = (0..n)
            .filter(|&v| mask & (1 << v) != 0)
            .map(|v| (nbr_masks[v] & !mask).count_ones() as i64)
            .sum();
        let mut best: Option<(i64, i64, u32)> = None;
        let total = 1u64 << low_bits;
        for step in 0..total {
            if step > 0 {
                // Gray code: flip the lowest set bit position of `step`.
                let bit = step.trailing_zeros();
                let v = bit as usize;
                let inside = (nbr_masks[v] & mask).count_ones() as i64;
                let deg = nbr_masks[v].count_ones() as i64;
                if mask & (1 << v) == 0 {
                    crossing += deg - 2 * inside;
                } else {
                    crossing -= deg - 2 * inside;
                }
                mask ^= 1 << v;
            }
            if mask == 0 {
                continue;
            }
            let a = mask.count_ones() as i64;
            let denom = a.min(n as i64 - a);
            let better = match best {
                None => true,
                Some((c, d, _)) => crossing * d < c * denom,
            };
            if better {
                best = Some((crossing, denom, mask));
            }
        }
        best
    });
    let (c, d, mask) = per_chunk
        .into_iter()
        .flatten()
        .reduce(|b, x| if x.0 * b.1 < b.0 * x.1 { x } else { b })
        .expect("at least one proper cut");
    let side: Vec<usize> = (0..n).filter(|&v| mask & (1 << v) != 0).collect();
    let cut = Cut::new(g, &side).expect("proper cut");
    debug_assert_eq!(cut.sparsity, Rational::new(c, d));
    Ok((cut.sparsity, cut))
}

/// Dense reference for `lambda2`, via [`dense_laplacian_spectrum`].
pub fn dense_lambda2(g: &Graph) -> f64 {
    dense_laplacian_spectrum(g)[1]
}

/// `|L x − λ x|`.
pub fn residual(g: &Graph, x: &[f64], lambda: f64) -> f64 {
    let mut out = vec![0.0; g.n()];
    laplacian_apply(g, x, &mut out);
    let r = DVector::from_iterator(
        g.n(),
        out.iter().zip(x.iter()).map(|(a, b)| a - lambda * b),
    );
    r.norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{generate, GenSpec, Kind};

    fn gen(kind: Kind) -> Graph {
        generate(&GenSpec { kind, seed: 1 }).unwrap()
    }

    fn two_triangles() -> Graph {
        gen(Kind::Barbell(3))
    }

    #[test]
    fn lambda2_closed_forms() {
        let c6 = gen(Kind::Cycle(6));
        let r = lambda2(&c6, DEFAULT_TOL).unwrap();
        let expected = 2.0 * (1.0 - (2.0 * std::f64::consts::PI / 6.0).cos());
        assert!((r.lambda2 - expected).abs() < 1e-7);
        assert!((r.lambda2 - 1.0).abs() < 1e-7);
        assert!(r.residual <= DEFAULT_TOL);
        let k4 = gen(Kind::Clique(4));
        assert!((lambda2(&k4, DEFAULT_TOL).unwrap().lambda2 - 4.0).abs() < 1e-7);
        let p2 = gen(Kind::Path(2));
        assert!((lambda2(&p2, DEFAULT_TOL).unwrap().lambda2 - 2.0).abs() < 1e-7);
    }

    #[test]
    fn fiedler_is_centered() {
        let g = gen(Kind::Grid(3, 4));
        let r = lambda2(&g, DEFAULT_TOL).unwrap();
        let s: f64 = r.fiedler.iter().sum();
        assert!(s.abs() < 1e-8);
        assert!(residual(&g, &r.fiedler, r.lambda2) <= 1e-7);
    }

    #[test]
    fn disconnected_and_tiny_inputs() {
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(
            lambda2(&g, DEFAULT_TOL).unwrap_err(),
            SpectralError::Disconnected { components: 2 }
        );
        assert_eq!(lambda2(&Graph::empty(1), 1e-8).unwrap_err(), SpectralError::TooSmall);
        assert_eq!(lambda2(&gen(Kind::Path(3)), 0.0).unwrap_err(), SpectralError::BadTolerance);
    }

    #[test]
    fn sweep_cuts() {
        let c6 = gen(Kind::Cycle(6));
        assert_eq!(sweep_cut(&c6, DEFAULT_TOL).unwrap().sparsity, Rational::new(2, 3));
        let k4 = gen(Kind::Clique(4));
        let s = sweep_cut(&k4, DEFAULT_TOL).unwrap();
        assert!(crate::ratio_to_f64(s.sparsity) <= (2.0f64 * 3.0 * 4.0).sqrt());
        let bb = two_triangles();
        let s = sweep_cut(&bb, DEFAULT_TOL).unwrap();
        assert_eq!(s.sparsity, Rational::new(1, 3));
        assert_eq!(s.crossing_edges.len(), 1);
    }

    #[test]
    fn exact_expansion_fixtures() {
        let (phi, w) = exact_expansion(&gen(Kind::Cycle(6))).unwrap();
        assert_eq!(phi, Rational::new(2, 3));
        assert_eq!(w.sparsity, phi);
        let (phi, w) = exact_expansion(&gen(Kind::Clique(4))).unwrap();
        assert_eq!(phi, Rational::from_integer(2));
        assert_eq!(w.smaller_side().len(), 2);
        let star = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let (phi, w) = exact_expansion(&star).unwrap();
        assert_eq!(phi, Rational::from_integer(1));
        assert!(w.is_consistent_with(&star));
        assert_eq!(exact_expansion(&two_triangles()).unwrap().0, Rational::new(1, 3));
        assert_eq!(
            exact_expansion(&Graph::empty(23)).unwrap_err(),
            SpectralError::TooLarge(23)
        );
    }

    #[test]
    fn exact_expansion_modes_agree() {
        let g = gen(Kind::Gnp(14, 0.3));
        if g.n() >= 2 {
            let a = exact_expansion_with(&g, Exec::Sequential).unwrap();
            let b = exact_expansion_with(&g, Exec::Parallel).unwrap();
            assert_eq!(a, b);
        }
    }
}
