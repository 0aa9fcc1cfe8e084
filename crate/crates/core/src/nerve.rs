//! Order complexes of strata posets and their integral homology.

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::smith::{smith_normal_form, IntMatrix, SmithForm};
use crate::strata::StrataPoset;

/// Simplicial complex of strict chains.
///
/// A simplex is a chain listed in increasing vertex order; `simplices[k]`
/// holds the `k`-simplices sorted lexicographically.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OrderComplex {
    pub simplices: Vec<Vec<Vec<usize>>>,
}

impl OrderComplex {
    /// Order complex of `n` elements under a strict order given on pairs
    /// `i < j` by `related(i, j)`. The relation must be transitive.
    pub fn from_relation(n: usize, related: impl Fn(usize, usize) -> bool) -> Self {
        let mut simplices: Vec<Vec<Vec<usize>>> = Vec::new();
        let mut chain = Vec::new();
        fn extend(
            n: usize,
            related: &dyn Fn(usize, usize) -> bool,
            chain: &mut Vec<usize>,
            out: &mut Vec<Vec<Vec<usize>>>,
        ) {
            let k = chain.len() - 1;
            if out.len() <= k {
                out.push(Vec::new());
            }
            out[k].push(chain.clone());
            let last = *chain.last().expect("nonempty");
            for next in last + 1..n {
                if related(last, next) {
                    chain.push(next);
                    extend(n, related, chain, out);
                    chain.pop();
                }
            }
        }
        for start in 0..n {
            chain.push(start);
            extend(n, &related, &mut chain, &mut simplices);
            chain.pop();
        }
        for layer in &mut simplices {
            layer.sort();
        }
        OrderComplex { simplices }
    }

    /// Order complex of the whole poset. Vertices are poset node indices,
    /// so every simplex runs from its least to its most degenerate stratum.
    pub fn of_poset(poset: &StrataPoset) -> Self {
        Self::from_relation(poset.len(), |i, j| poset.reaches(j, i))
    }

    /// Order complex of the boundary strata alone (the maximum removed).
    /// Vertex `i` is poset node `i + 1`.
    pub fn of_boundary(poset: &StrataPoset) -> Self {
        let n = poset.len().saturating_sub(1);
        Self::from_relation(n, |i, j| poset.reaches(j + 1, i + 1))
    }

    pub fn dimension(&self) -> Option<usize> {
        self.simplices.len().checked_sub(1)
    }

    pub fn counts(&self) -> Vec<usize> {
        self.simplices.iter().map(Vec::len).collect()
    }

    /// Alternating sum of simplex counts.
    pub fn euler_characteristic(&self) -> i64 {
        self.counts().iter().enumerate().map(|(k, &c)| if k % 2 == 0 { c as i64 } else { -(c as i64) }).sum()
    }

    /// `∂_k` for every `k` from 1 to the dimension, with the sign of face
    /// `i` equal to `(-1)^i`.
    pub fn boundary_matrices(&self) -> ChainComplex {
        let boundaries = (1..self.simplices.len())
            .map(|k| {
                let faces = &self.simplices[k - 1];
                let cells = &self.simplices[k];
                let mut m = IntMatrix::zeros(faces.len(), cells.len());
                for (col, cell) in cells.iter().enumerate() {
                    for drop in 0..cell.len() {
                        let face: Vec<usize> =
                            cell.iter().enumerate().filter(|&(i, _)| i != drop).map(|(_, &v)| v).collect();
                        let row = faces.binary_search(&face).expect("faces of chains are chains");
                        m.set(row, col, if drop % 2 == 0 { 1 } else { -1 });
                    }
                }
                m
            })
            .collect();
        ChainComplex { ranks: self.counts(), boundaries }
    }

    pub fn homology(&self) -> Vec<Homology> {
        self.boundary_matrices().homology()
    }
}

/// Free chain groups of the given ranks and the boundary maps between them.
/// `boundaries[k - 1]` is `∂_k : C_k → C_{k-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    pub ranks: Vec<usize>,
    pub boundaries: Vec<IntMatrix>,
}

impl ChainComplex {
    /// `∂_k`, with `∂_0` and maps past the top degree reported as `None`.
    pub fn boundary(&self, k: usize) -> Option<&IntMatrix> {
        k.checked_sub(1).and_then(|i| self.boundaries.get(i))
    }

    /// Whether `∂_{k-1} ∂_k = 0` for every `k`.
    pub fn squares_to_zero(&self) -> bool {
        self.boundaries
            .windows(2)
            .all(|pair| pair[0].mul_exact(&pair[1]).is_some_and(|p| p.iter().flatten().all(|&x| x == 0)))
    }

    pub fn homology(&self) -> Vec<Homology> {
        let forms: Vec<SmithForm> = self.boundaries.par_iter().map(smith_normal_form).collect();
        let rank_of = |k: usize| k.checked_sub(1).and_then(|i| forms.get(i)).map_or(0, SmithForm::rank);
        (0..self.ranks.len())
            .map(|k| Homology {
                degree: k,
                betti: self.ranks[k] - rank_of(k) - rank_of(k + 1),
                torsion: forms.get(k).map_or_else(Vec::new, SmithForm::torsion),
            })
            .collect()
    }
}

/// `H_degree ≅ Z^betti ⊕ ⨁ Z/t` over the torsion coefficients `t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Homology {
    pub degree: usize,
    pub betti: usize,
    #[serde(serialize_with = "decimal_list")]
    pub torsion: Vec<BigInt>,
}

impl Homology {
    pub fn is_trivial(&self) -> bool {
        self.betti == 0 && self.torsion.is_empty()
    }
}

/// Alternating sum of Betti numbers.
pub fn betti_euler_characteristic(homology: &[Homology]) -> i64 {
    homology.iter().map(|h| if h.degree % 2 == 0 { h.betti as i64 } else { -(h.betti as i64) }).sum()
}

/// Whether the homology is that of a point.
pub fn is_acyclic(homology: &[Homology]) -> bool {
    homology.first().is_some_and(|h0| h0.betti == 1 && h0.torsion.is_empty())
        && homology.iter().skip(1).all(Homology::is_trivial)
}

fn decimal_list<S: Serializer>(values: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(values.len()))?;
    for v in values {
        match u64::try_from(v) {
            Ok(small) => seq.serialize_element(&small)?,
            Err(_) => seq.serialize_element(&v.to_string())?,
        }
    }
    seq.end()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stable_graph::AmbientType;
    use crate::strata::build_poset;

    fn poset(g: u32, n: u32) -> StrataPoset {
        build_poset(AmbientType::new(g, n).unwrap()).unwrap()
    }

    #[test]
    fn interval() {
        let x = OrderComplex::of_poset(&poset(1, 1));
        assert_eq!(x.simplices, vec![vec![vec![0], vec![1]], vec![vec![0, 1]]]);
        let c = x.boundary_matrices();
        assert_eq!(c.boundaries, vec![IntMatrix::from_rows(&[vec![-1], vec![1]])]);
        assert_eq!(x.euler_characteristic(), 1);
        let h = x.homology();
        assert!(is_acyclic(&h));
    }

    #[test]
    fn star() {
        let x = OrderComplex::of_poset(&poset(0, 4));
        assert_eq!(x.counts(), vec![4, 3]);
        let d1 = &x.boundary_matrices().boundaries[0];
        assert_eq!((d1.rows(), d1.cols()), (4, 3));
        for col in 0..3 {
            let entries: Vec<i64> = (0..4).map(|r| d1.get(r, col)).filter(|&v| v != 0).collect();
            assert_eq!(entries, vec![-1, 1]);
        }
        assert_eq!(x.euler_characteristic(), 1);
        assert!(is_acyclic(&x.homology()));
    }

    #[test]
    fn empty_complex() {
        let x = OrderComplex::from_relation(0, |_, _| true);
        assert_eq!(x.dimension(), None);
        let c = x.boundary_matrices();
        assert!(c.boundaries.is_empty());
        assert!(c.homology().is_empty());
        assert_eq!(x.euler_characteristic(), 0);
    }

    #[test]
    fn circle_and_projective_plane_like_torsion() {
        // Boundary of a triangle as a poset: 3 vertices below 3 edges.
        // Elements 0,1,2 are edges, 3,4,5 vertices; i < j related when vertex j lies on edge i.
        let on = |e: usize, v: usize| matches!((e, v), (0, 3) | (0, 4) | (1, 4) | (1, 5) | (2, 3) | (2, 5));
        let x = OrderComplex::from_relation(6, |i, j| i < 3 && j >= 3 && on(i, j));
        let h = x.homology();
        assert_eq!(h.iter().map(|x| x.betti).collect::<Vec<_>>(), vec![1, 1]);
        assert_eq!(betti_euler_characteristic(&h), x.euler_characteristic());
        // A chain complex with ∂ = [2] has Z/2 in degree 0.
        let c = ChainComplex { ranks: vec![1, 1], boundaries: vec![IntMatrix::from_rows(&[vec![2]])] };
        let h = c.homology();
        assert_eq!(h[0].torsion, vec![BigInt::from(2)]);
        assert_eq!(h[0].betti, 0);
        assert_eq!(h[1].betti, 0);
    }

    #[test]
    fn genus_two_nerve() {
        let p = poset(2, 0);
        let x = OrderComplex::of_poset(&p);
        let c = x.boundary_matrices();
        assert!(c.squares_to_zero());
        assert!(is_acyclic(&c.homology()));
        assert_eq!(x.euler_characteristic(), 1);
        let b = OrderComplex::of_boundary(&p);
        assert_eq!(betti_euler_characteristic(&b.homology()), b.euler_characteristic());
    }
}
