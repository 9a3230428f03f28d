//! Degree-based topological indices evaluated edge by edge.

use crate::graph::Graph;
use crate::radical::{RadicalSum, Rational};

/// Exact Sombor index: the sum over edges `uv` of `sqrt(d_u^2 + d_v^2)`.
///
/// Edges are grouped by their degree pair first, so each distinct radicand is
/// normalized once.
pub fn sombor_bruteforce(g: &Graph) -> RadicalSum {
    let mut out = RadicalSum::zero();
    for ((a, b), count) in g.degree_pair_counts() {
        let (a, b) = (a as u64, b as u64);
        out.add_term(Rational::from_integer(count as i128), a * a + b * b);
    }
    out
}

/// A symmetric edge weight `H(d_u, d_v)`.
pub trait DegreeFunction: Sync {
    fn eval(&self, du: usize, dv: usize) -> f64;

    /// Whether [`degree_index_exact`] can evaluate this function without rounding.
    fn exact(&self) -> bool {
        false
    }
}

impl<F: Fn(usize, usize) -> f64 + Sync> DegreeFunction for F {
    fn eval(&self, du: usize, dv: usize) -> f64 {
        self(du, dv)
    }
}

/// `sqrt(x^2 + y^2)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Sombor;

impl DegreeFunction for Sombor {
    fn eval(&self, du: usize, dv: usize) -> f64 {
        ((du * du + dv * dv) as f64).sqrt()
    }

    fn exact(&self) -> bool {
        true
    }
}

/// `x + y`; summed over edges this is the first Zagreb index.
#[derive(Clone, Copy, Debug, Default)]
pub struct FirstZagreb;

impl DegreeFunction for FirstZagreb {
    fn eval(&self, du: usize, dv: usize) -> f64 {
        (du + dv) as f64
    }
}

/// `x * y`; the second Zagreb index.
#[derive(Clone, Copy, Debug, Default)]
pub struct SecondZagreb;

impl DegreeFunction for SecondZagreb {
    fn eval(&self, du: usize, dv: usize) -> f64 {
        (du * dv) as f64
    }
}

/// `1 / sqrt(x y)`; the Randic index.
#[derive(Clone, Copy, Debug, Default)]
pub struct Randic;

impl DegreeFunction for Randic {
    fn eval(&self, du: usize, dv: usize) -> f64 {
        1.0 / ((du * dv) as f64).sqrt()
    }
}

/// Float accumulation of `H` over every edge.
pub fn degree_index_bruteforce(g: &Graph, h: &dyn DegreeFunction) -> f64 {
    g.edges()
        .map(|(u, v)| h.eval(g.degree(u), g.degree(v)))
        .sum()
}

/// The exact route for functions flagged [`DegreeFunction::exact`]; only the
/// Sombor weight qualifies.
pub fn degree_index_exact(g: &Graph, h: &dyn DegreeFunction) -> Option<RadicalSum> {
    h.exact().then(|| sombor_bruteforce(g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{circulant_graph, complete_graph, regular_circulant_offsets, unit_graph, total_graph};
    use crate::ring::FiniteRing;

    fn r(n: i128) -> Rational {
        Rational::from_integer(n)
    }

    /// Sum of float square roots over explicit edges.
    fn float_oracle(g: &Graph) -> f64 {
        g.edges()
            .map(|(u, v)| {
                let (a, b) = (g.degree(u) as f64, g.degree(v) as f64);
                (a * a + b * b).sqrt()
            })
            .sum()
    }

    #[test]
    fn sombor_examples() {
        assert_eq!(sombor_bruteforce(&complete_graph(4)), RadicalSum::term(r(18), 2));

        let z4 = FiniteRing::zn(4).unwrap();
        assert_eq!(sombor_bruteforce(&total_graph(&z4).0), RadicalSum::term(r(2), 2));

        let z5 = FiniteRing::zn(5).unwrap();
        let so = sombor_bruteforce(&unit_graph(&z5).0);
        assert_eq!(so, RadicalSum::integer(20) + RadicalSum::term(r(12), 2));
        assert!((so.to_f64() - float_oracle(&unit_graph(&z5).0)).abs() < 1e-12);
    }

    #[test]
    fn degree_index_examples() {
        assert_eq!(degree_index_bruteforce(&complete_graph(3), &FirstZagreb), 12.0);
        assert_eq!(degree_index_bruteforce(&Graph::empty(7), &Sombor), 0.0);
        assert_eq!(degree_index_bruteforce(&Graph::empty(7), &Randic), 0.0);

        let (g, _) = unit_graph(&FiniteRing::zn(5).unwrap());
        let v = degree_index_bruteforce(&g, &Sombor);
        assert!((v - 36.970_562_748_477_14).abs() < 1e-9);
        let closure = |a: usize, b: usize| ((a * a + b * b) as f64).sqrt();
        assert!((degree_index_bruteforce(&g, &closure) - v).abs() < 1e-12);
        assert_eq!(degree_index_exact(&g, &Sombor), Some(sombor_bruteforce(&g)));
        assert_eq!(degree_index_exact(&g, &SecondZagreb), None);
    }

    #[test]
    fn degree_functions_are_symmetric() {
        let fs: [&dyn DegreeFunction; 4] = [&Sombor, &FirstZagreb, &SecondZagreb, &Randic];
        for h in fs {
            for a in 1..30 {
                for b in 1..30 {
                    assert_eq!(h.eval(a, b), h.eval(b, a));
                }
            }
        }
    }

    #[test]
    fn float_index_agrees_with_exact_sombor() {
        for n in 2..=40 {
            let ring = FiniteRing::zn(n).unwrap();
            for g in [total_graph(&ring).0, unit_graph(&ring).0] {
                let exact = sombor_bruteforce(&g).to_f64();
                let float = degree_index_bruteforce(&g, &Sombor);
                assert!((exact - float).abs() <= 1e-9 * exact.max(1.0));
                assert!((exact - float_oracle(&g)).abs() <= 1e-9 * exact.max(1.0));
            }
        }
    }

    #[test]
    fn sombor_is_additive_over_disjoint_unions() {
        let a = circulant_graph(7, &[1, 3]).unwrap();
        let (b, _) = total_graph(&FiniteRing::zn(15).unwrap());
        let shift = a.vertex_count();
        let union = Graph::from_edges(
            shift + b.vertex_count(),
            a.edges().chain(b.edges().map(|(u, v)| (u + shift, v + shift))),
        );
        assert_eq!(sombor_bruteforce(&union), sombor_bruteforce(&a) + sombor_bruteforce(&b));
    }

    #[test]
    fn regular_graphs_follow_nk2_over_root2() {
        for n in 1..=40usize {
            for k in 0..n {
                let Some(off) = regular_circulant_offsets(n, k) else { continue };
                let g = circulant_graph(n, &off).unwrap();
                let expected = RadicalSum::term(Rational::new((n * k * k) as i128, 2), 2);
                assert_eq!(sombor_bruteforce(&g), expected, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn complement_sum_is_not_complete_for_irregular_graphs() {
        // path on 3 vertices: SO(P3) = 2*sqrt(5), complement is one edge: sqrt(2)
        let p3 = Graph::from_edges(3, [(0, 1), (1, 2)]);
        let so = sombor_bruteforce(&p3);
        let so_c = sombor_bruteforce(&p3.complement());
        assert_eq!(so, RadicalSum::term(r(2), 5));
        assert_eq!(so_c, RadicalSum::sqrt(2));
        let k3 = sombor_bruteforce(&complete_graph(3));
        assert_ne!(&so + &so_c, k3);
        // the cross term 2*sqrt(SO*SO') has no exact square root here, unlike the regular case
        assert!((&so * &so_c).sqrt_of_rational().is_none());
    }
}
