//! Fractional tilings by embeddable structures, solved as an exact LP.

use std::collections::BTreeMap;

use num::{Signed, Zero};
use serde::ser::SerializeStruct;
use serde::Serialize;

use super::structures::{enumerate_structures, EmbStructure};
use super::Multigraph2;
use crate::error::{Error, Result};
use crate::lp;
use crate::rational::{self, Rational};

/// Non-negative weights on `K_r` structures of a `k`-cluster multigraph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FractionalTiling {
    pub r: usize,
    pub k: usize,
    /// Sorted by structure, weights strictly positive.
    pub weights: Vec<(EmbStructure, Rational)>,
}

impl FractionalTiling {
    pub fn zero(r: usize, k: usize) -> Self {
        FractionalTiling {
            r,
            k,
            weights: Vec::new(),
        }
    }

    /// Merges repeated structures and drops zero weights.
    pub fn from_weights(r: usize, k: usize, weights: impl IntoIterator<Item = (EmbStructure, Rational)>) -> Self {
        let mut merged: BTreeMap<EmbStructure, Rational> = BTreeMap::new();
        for (s, w) in weights {
            *merged.entry(s).or_insert_with(Rational::zero) += w;
        }
        FractionalTiling {
            r,
            k,
            weights: merged.into_iter().filter(|(_, w)| !w.is_zero()).collect(),
        }
    }

    /// `omega(v) = sum_K omega(K) i_K(v)` for every cluster.
    pub fn loads(&self) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.k];
        for (s, w) in &self.weights {
            for (&v, &m) in s.support.iter().zip(&s.mult) {
                out[v] += w * rational::int(m as i64);
            }
        }
        out
    }

    /// `omega(R)`, the sum of all loads.
    pub fn total(&self) -> Rational {
        self.loads().into_iter().sum()
    }

    pub fn scaled(&self, factor: &Rational) -> Self {
        FractionalTiling::from_weights(
            self.r,
            self.k,
            self.weights.iter().map(|(s, w)| (s.clone(), w * factor)),
        )
    }

    /// Every structure is a `K_r` structure of `r`, weights are in `[0, 1]`,
    /// and no cluster carries load above 1.
    pub fn is_valid(&self, multigraph: &Multigraph2) -> bool {
        let one = rational::int(1);
        multigraph.k() == self.k
            && self
                .weights
                .iter()
                .all(|(s, w)| s.is_valid(multigraph, self.r) && !w.is_negative() && *w <= one)
            && self.loads().iter().all(|l| *l <= one)
    }
}

impl Serialize for FractionalTiling {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry<'a> {
            structure: &'a EmbStructure,
            weight: String,
        }
        let entries: Vec<Entry> = self
            .weights
            .iter()
            .map(|(st, w)| Entry {
                structure: st,
                weight: rational::to_pq(w),
            })
            .collect();
        let loads: Vec<String> = self.loads().iter().map(rational::to_pq).collect();
        let mut out = s.serialize_struct("FractionalTiling", 5)?;
        out.serialize_field("r", &self.r)?;
        out.serialize_field("k", &self.k)?;
        out.serialize_field("weights", &entries)?;
        out.serialize_field("loads", &loads)?;
        out.serialize_field("total", &rational::to_pq(&self.total()))?;
        out.end()
    }
}

/// Optimal fractional tiling with its dual certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TilingLp {
    pub tiling: FractionalTiling,
    #[serde(with = "crate::rational::pq")]
    pub value: Rational,
    /// One price per cluster; feasible for the dual with equal objective.
    #[serde(with = "crate::rational::pq_vec")]
    pub dual: Vec<Rational>,
    pub structures: usize,
    pub certified: bool,
}

/// Maximises `omega(R)` over fractional `K_rr` tilings of `r`.
pub fn fractional_tiling(r: &Multigraph2, rr: usize) -> Result<TilingLp> {
    let structures = enumerate_structures(r, rr);
    let k = r.k();
    if structures.is_empty() {
        return Ok(TilingLp {
            tiling: FractionalTiling::zero(rr, k),
            value: Rational::zero(),
            dual: vec![Rational::zero(); k],
            structures: 0,
            certified: true,
        });
    }
    let c = vec![rational::from_usize(rr); structures.len()];
    let a: Vec<Vec<Rational>> = (0..k)
        .map(|v| structures.iter().map(|s| rational::int(s.load(v) as i64)).collect())
        .collect();
    let b = vec![rational::int(1); k];
    let mut sol = lp::maximize(&c, &a, &b)?;
    // among optimal tilings prefer structures with more single clusters,
    // which need no edges inside a cluster
    let eps = rational::ratio(1, (4 * rr * k * k + 4) as i64);
    let nudged: Vec<Rational> = structures
        .iter()
        .map(|s| rational::from_usize(rr) + &eps * rational::from_usize(s.singles().len()))
        .collect();
    let alt = lp::maximize(&nudged, &a, &b)?;
    let alt_value: Rational = alt.x.iter().zip(&c).map(|(x, ci)| x * ci).sum();
    if alt_value == sol.value {
        sol.x = alt.x;
    }
    let certified = lp::certify(&c, &a, &b, &sol);
    let tiling = FractionalTiling::from_weights(rr, k, structures.iter().cloned().zip(sol.x.iter().cloned()));
    if tiling.total() != sol.value {
        return Err(Error::ConstructionBug("tiling loads disagree with the LP value".into()));
    }
    Ok(TilingLp {
        tiling,
        value: sol.value,
        dual: sol.dual,
        structures: structures.len(),
        certified,
    })
}

/// Rewrites a `K_4` tiling as a `K_3` tiling with the same cluster loads.
pub fn convert_4_to_3(omega: &FractionalTiling) -> Result<FractionalTiling> {
    if omega.r != 4 {
        return Err(Error::UnknownCase(format!("expected a K_4 tiling, got r = {}", omega.r)));
    }
    let third = rational::ratio(1, 3);
    let two_thirds = rational::ratio(2, 3);
    let mut out = Vec::new();
    for (s, w) in &omega.weights {
        match s.shape() {
            (4, 0) => {
                for skip in 0..4 {
                    let assign = s.support.iter().enumerate().filter(|p| p.0 != skip).map(|p| (*p.1, 1)).collect();
                    out.push((EmbStructure::new(assign), w * &third));
                }
            }
            (2, 1) => {
                let singles = s.singles();
                let d = s.doubles()[0];
                for &x in &singles {
                    out.push((EmbStructure::new(vec![(x, 1), (d, 2)]), w * &third));
                }
                let plain = singles.iter().map(|&x| (x, 1)).chain([(d, 1)]).collect();
                out.push((EmbStructure::new(plain), w * &two_thirds));
            }
            (0, 2) => {
                let d = s.doubles();
                out.push((EmbStructure::new(vec![(d[0], 1), (d[1], 2)]), w * &two_thirds));
                out.push((EmbStructure::new(vec![(d[0], 2), (d[1], 1)]), w * &two_thirds));
            }
            shape => return Err(Error::UnknownCase(format!("structure {s} with shape {shape:?}"))),
        }
    }
    Ok(FractionalTiling::from_weights(3, omega.k, out))
}

/// Rewrites any tiling as a `K_2` tiling of doubled singletons: cluster `v`
/// gets weight `omega(v) / 2`, so its load stays `omega(v)`.
pub fn convert_4_to_2(omega: &FractionalTiling) -> FractionalTiling {
    let half = rational::ratio(1, 2);
    FractionalTiling::from_weights(
        2,
        omega.k,
        omega
            .loads()
            .into_iter()
            .enumerate()
            .map(|(v, l)| (EmbStructure::new(vec![(v, 2)]), l * &half)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn lp_examples() {
        let mut pair = Multigraph2::new(2);
        pair.set(0, 1, 2).unwrap();
        let lp = fractional_tiling(&pair, 3).unwrap();
        assert_eq!(lp.value, int(2));
        assert!(lp.certified && lp.tiling.is_valid(&pair));

        let lone = Multigraph2::new(1);
        assert_eq!(fractional_tiling(&lone, 3).unwrap().value, int(0));

        let tri = Multigraph2::complete(3, 2);
        let lp = fractional_tiling(&tri, 3).unwrap();
        assert_eq!(lp.value, int(3));
        assert_eq!(lp.tiling.loads(), vec![int(1); 3]);
    }

    #[test]
    fn conversions_keep_loads() {
        let k4 = FractionalTiling::from_weights(4, 4, [(EmbStructure::new((0..4).map(|v| (v, 1)).collect()), ratio(1, 4))]);
        let c = convert_4_to_3(&k4).unwrap();
        assert_eq!(c.weights.len(), 4);
        assert!(c.weights.iter().all(|(_, w)| *w == ratio(1, 12)));
        assert_eq!(c.loads(), k4.loads());

        let dd = FractionalTiling::from_weights(4, 2, [(EmbStructure::new(vec![(0, 2), (1, 2)]), ratio(1, 3))]);
        let c = convert_4_to_3(&dd).unwrap();
        assert!(c.weights.iter().all(|(_, w)| *w == ratio(2, 9)));
        assert_eq!(c.loads(), dd.loads());

        let mixed = FractionalTiling::from_weights(4, 3, [(EmbStructure::new(vec![(0, 1), (1, 1), (2, 2)]), ratio(1, 2))]);
        assert_eq!(convert_4_to_3(&mixed).unwrap().loads(), mixed.loads());
        assert_eq!(convert_4_to_2(&mixed).loads(), mixed.loads());

        let zero = FractionalTiling::zero(4, 3);
        assert_eq!(convert_4_to_3(&zero).unwrap().weights, vec![]);
        assert_eq!(convert_4_to_2(&zero).weights, vec![]);
        assert!(matches!(convert_4_to_3(&FractionalTiling::zero(3, 1)), Err(Error::UnknownCase(_))));
    }
}
