//! Embedding arbitrary graphs as minors into bounded-degree expanders.
//!
//! The entry point is [`embed::embed_minor`]. Given a connected host graph
//! `G`, a claimed expansion `alpha` and a target graph `H`, it either returns
//! a [`minor::MinorModel`] of `H` in `G` (always re-verified before it is
//! returned), or a [`Cut`] of `G` whose exact sparsity is below `alpha`,
//! proving that `G` is not an `alpha`-expander. Probabilistic stages that
//! exhaust their retry budget are reported as failures, never as answers.
//!
//! The supporting modules are usable on their own:
//!
//! | module | contents |
//! |---|---|
//! | [`graph`] | graphs, cuts, matchings, edge-list I/O |
//! | [`spectral`] | Laplacian `lambda2`, sweep cuts, exhaustive expansion |
//! | [`partition`] | balanced splits, spanning-tree grouping, cut repair |
//! | [`flow`] | hop-bounded multicommodity flow, region growing, routing |
//! | [`paths`] | resampling selection of disjoint paths |
//! | [`minor`] | minor models, the verifier, a brute-force oracle |
//! | [`generators`] | seeded host and target families |

pub mod embed;
pub mod exec;
pub mod flow;
pub mod generators;
pub mod graph;
pub mod minor;
pub mod partition;
pub mod paths;
pub mod rng;
pub mod spectral;

/// Exact rational used for sparsities and expansion parameters.
pub type Rational = num_rational::Ratio<i64>;

pub use graph::{cut_of, Cut, Graph, GraphError, Matching};

/// Parses `"p/q"` or an integer into a [`Rational`].
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.trim().parse().ok()?;
            let q: i64 = q.trim().parse().ok()?;
            (q != 0).then(|| Rational::new(p, q))
        }
        None => s.parse::<i64>().ok().map(Rational::from_integer),
    }
}

pub(crate) fn ratio_to_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Best rational approximation of `x` with denominator at most `max_denom`,
/// rounded down so the result never exceeds `x`.
pub fn rational_below(x: f64, max_denom: i64) -> Rational {
    let mut best = Rational::from_integer(x.floor() as i64);
    for q in 1..=max_denom {
        let p = (x * q as f64).floor() as i64;
        let cand = Rational::new(p, q);
        if ratio_to_f64(cand) <= x && cand > best {
            best = cand;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("1/4"), Some(Rational::new(1, 4)));
        assert_eq!(parse_rational(" 3 "), Some(Rational::from_integer(3)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
        let r = rational_below(0.1234, 1000);
        assert!(ratio_to_f64(r) <= 0.1234 && ratio_to_f64(r) > 0.123);
    }
}
