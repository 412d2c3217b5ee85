//! Exact cover and maximum packing over copy types.

use std::collections::{HashMap, HashSet};

use num::{One, Zero};

use super::quotient::{CopyType, Quotient};
use crate::error::{Error, Result};
use crate::lp;
use crate::rational::{self, Rational};

const MEMO_LIMIT: usize = 2_000_000;

pub(crate) struct Table<'a> {
    pub sizes: Vec<u32>,
    pub types: &'a [CopyType],
    pub by_class: Vec<Vec<usize>>,
    pub h: u32,
}

impl<'a> Table<'a> {
    pub fn new(q: &Quotient, types: &'a [CopyType], h: usize) -> Self {
        let mut by_class = vec![Vec::new(); q.k()];
        for (i, t) in types.iter().enumerate() {
            for &(c, _) in &t.counts {
                by_class[c as usize].push(i);
            }
        }
        Table {
            sizes: q.sizes(),
            types,
            by_class,
            h: h as u32,
        }
    }

    fn fits(&self, t: usize, r: &[u32]) -> bool {
        self.types[t].counts.iter().all(|&(c, k)| r[c as usize] >= k)
    }

    fn apply(&self, t: usize, r: &mut [u32]) {
        for &(c, k) in &self.types[t].counts {
            r[c as usize] -= k;
        }
    }

    fn undo(&self, t: usize, r: &mut [u32]) {
        for &(c, k) in &self.types[t].counts {
            r[c as usize] += k;
        }
    }

    /// Class with the fewest fitting types among classes with remaining
    /// vertices, with that count. `None` when nothing remains.
    fn fail_first(&self, r: &[u32]) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for c in 0..r.len() {
            if r[c] == 0 {
                continue;
            }
            let cnt = self.by_class[c].iter().filter(|&&t| self.fits(t, r)).count();
            if best.is_none_or(|(_, b)| cnt < b) {
                best = Some((c, cnt));
                if cnt == 0 {
                    break;
                }
            }
        }
        best
    }

    /// Optimum of the fractional packing relaxation, by column generation:
    /// solve on a subset of types, then add the types the duals price as
    /// improving until none are left.
    pub fn lp_bound(&self) -> Result<Rational> {
        if self.types.is_empty() {
            return Ok(Rational::zero());
        }
        let rows: Vec<usize> = (0..self.sizes.len())
            .filter(|&c| !self.by_class[c].is_empty())
            .collect();
        let mut row_of = vec![usize::MAX; self.sizes.len()];
        for (i, &c) in rows.iter().enumerate() {
            row_of[c] = i;
        }
        let b: Vec<Rational> = rows
            .iter()
            .map(|&c| rational::from_usize(self.sizes[c] as usize))
            .collect();
        let batch = rows.len().max(20);
        let mut active: Vec<usize> = (0..self.types.len().min(batch)).collect();
        let mut in_active = vec![false; self.types.len()];
        for &t in &active {
            in_active[t] = true;
        }
        loop {
            let mut a: Vec<Vec<Rational>> = (0..rows.len())
                .map(|_| vec![Rational::zero(); active.len()])
                .collect();
            for (j, &t) in active.iter().enumerate() {
                for &(c, k) in &self.types[t].counts {
                    a[row_of[c as usize]][j] = rational::from_usize(k as usize);
                }
            }
            let obj = vec![Rational::one(); active.len()];
            let sol = lp::maximize(&obj, &a, &b)?;
            let mut violated: Vec<(Rational, usize)> = (0..self.types.len())
                .filter(|&t| !in_active[t])
                .filter_map(|t| {
                    let price: Rational = self.types[t]
                        .counts
                        .iter()
                        .map(|&(c, k)| &sol.dual[row_of[c as usize]] * rational::from_usize(k as usize))
                        .sum();
                    (price < Rational::one()).then_some((price, t))
                })
                .collect();
            if violated.is_empty() {
                return Ok(sol.value);
            }
            violated.sort();
            for (_, t) in violated.into_iter().take(batch) {
                in_active[t] = true;
                active.push(t);
            }
        }
    }
}

/// Multiset of types summing exactly to the class sizes, if one exists.
pub(crate) fn exact_cover(table: &Table, budget: usize) -> Result<Option<Vec<usize>>> {
    struct St<'t, 'a> {
        table: &'t Table<'a>,
        dead: HashSet<Vec<u32>>,
        nodes: usize,
        budget: usize,
        chosen: Vec<usize>,
    }
    fn go(st: &mut St, r: &mut Vec<u32>) -> Result<bool> {
        let Some((c, cnt)) = st.table.fail_first(r) else {
            return Ok(true);
        };
        if cnt == 0 || st.dead.contains(r) {
            return Ok(false);
        }
        st.nodes += 1;
        if st.nodes > st.budget {
            return Err(Error::cap("factor search nodes", st.budget, st.nodes));
        }
        let options: Vec<usize> = st.table.by_class[c]
            .iter()
            .copied()
            .filter(|&t| st.table.fits(t, r))
            .collect();
        for t in options {
            st.table.apply(t, r);
            st.chosen.push(t);
            if go(st, r)? {
                return Ok(true);
            }
            st.chosen.pop();
            st.table.undo(t, r);
        }
        if st.dead.len() < MEMO_LIMIT {
            st.dead.insert(r.clone());
        }
        Ok(false)
    }
    let total: u32 = table.sizes.iter().sum();
    if table.h == 0 || !total.is_multiple_of(table.h) {
        return Ok(None);
    }
    let mut st = St {
        table,
        dead: HashSet::new(),
        nodes: 0,
        budget,
        chosen: Vec::new(),
    };
    let mut r = table.sizes.clone();
    if go(&mut st, &mut r)? {
        Ok(Some(st.chosen))
    } else {
        Ok(None)
    }
}

/// A largest multiset of types fitting inside the class sizes, using only
/// types accepted by `allow`; stops as soon as `stop_at` copies are found.
pub(crate) fn max_packing(
    table: &Table,
    allow: &dyn Fn(usize) -> bool,
    stop_at: usize,
    budget: usize,
) -> Result<Vec<usize>> {
    struct St<'t, 'a> {
        table: &'t Table<'a>,
        allowed: Vec<bool>,
        seen: HashMap<Vec<u32>, usize>,
        nodes: usize,
        budget: usize,
        stop_at: usize,
        used: Vec<usize>,
        best: Vec<usize>,
    }
    impl St<'_, '_> {
        fn fitting(&self, c: usize, r: &[u32]) -> Vec<usize> {
            self.table.by_class[c]
                .iter()
                .copied()
                .filter(|&t| self.allowed[t] && self.table.fits(t, r))
                .collect()
        }
    }
    /// Returns `true` once the search may stop.
    fn go(st: &mut St, r: &mut Vec<u32>) -> Result<bool> {
        st.nodes += 1;
        if st.nodes > st.budget {
            return Err(Error::cap("tiling search nodes", st.budget, st.nodes));
        }
        if st.used.len() > st.best.len() {
            st.best = st.used.clone();
            if st.best.len() >= st.stop_at {
                return Ok(true);
            }
        }
        // vertices no remaining copy can use are dropped for good
        let mut dropped: Vec<(usize, u32)> = Vec::new();
        let mut choice: Option<(usize, Vec<usize>)> = None;
        for c in 0..r.len() {
            if r[c] == 0 {
                continue;
            }
            let opts = st.fitting(c, r);
            if opts.is_empty() {
                dropped.push((c, r[c]));
            } else if choice.as_ref().is_none_or(|(_, o)| opts.len() < o.len()) {
                choice = Some((c, opts));
            }
        }
        for &(c, _) in &dropped {
            r[c] = 0;
        }
        let result = (|| {
            let Some((c, opts)) = choice.filter(|(c, _)| r[*c] > 0) else {
                return Ok(false);
            };
            let left: u32 = r.iter().sum();
            if st.used.len() + (left / st.table.h) as usize <= st.best.len() {
                return Ok(false);
            }
            match st.seen.get(r.as_slice()) {
                Some(&u) if u >= st.used.len() => return Ok(false),
                _ => {
                    if st.seen.len() < MEMO_LIMIT {
                        st.seen.insert(r.clone(), st.used.len());
                    }
                }
            }
            for t in opts {
                if !st.table.fits(t, r) {
                    continue;
                }
                st.table.apply(t, r);
                st.used.push(t);
                let stop = go(st, r)?;
                st.used.pop();
                st.table.undo(t, r);
                if stop {
                    return Ok(true);
                }
            }
            r[c] -= 1;
            let stop = go(st, r)?;
            r[c] += 1;
            Ok(stop)
        })();
        for &(c, k) in &dropped {
            r[c] = k;
        }
        result
    }
    let allowed = (0..table.types.len()).map(allow).collect();
    let mut st = St {
        table,
        allowed,
        seen: HashMap::new(),
        nodes: 0,
        budget,
        stop_at,
        used: Vec::new(),
        best: Vec::new(),
    };
    if stop_at > 0 && table.h > 0 {
        let mut r = table.sizes.clone();
        go(&mut st, &mut r)?;
    }
    Ok(st.best)
}

/// Turns chosen types into explicit vertex maps.
pub(crate) fn realize(q: &Quotient, types: &[CopyType], chosen: &[usize]) -> Vec<Vec<usize>> {
    let mut next = vec![0usize; q.k()];
    chosen
        .iter()
        .map(|&t| {
            types[t]
                .roles
                .iter()
                .map(|&c| {
                    let v = q.classes[c][next[c]];
                    next[c] += 1;
                    v
                })
                .collect()
        })
        .collect()
}
