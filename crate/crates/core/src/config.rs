//! Search budgets shared by the exact solvers.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Named size limits and node budgets. Every exact search checks one of these
/// and fails with [`Error::CapExceeded`] instead of running unbounded.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    /// Largest graph handed to the exact independence solver.
    pub alpha_exact: usize,
    /// Largest pattern for which all optimal acyclic partitions are listed.
    pub partition_enum: usize,
    /// Largest pattern accepted by the arboricity search.
    pub arboricity: usize,
    /// Largest host for exact factor decisions.
    pub factor_host: usize,
    /// Maximum number of copies listed by `enumerate_copies`.
    pub copies: usize,
    /// Node budget of the exact-cover search.
    pub factor_nodes: usize,
    /// Largest pattern whose automorphism group is computed by brute force.
    pub automorphisms: usize,
    /// Node budget of a single embedding call.
    pub embed_nodes: usize,
    /// Candidate sets examined by connector and absorber searches.
    pub connector_candidates: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            alpha_exact: 80,
            partition_enum: 14,
            arboricity: 64,
            factor_host: 60,
            copies: 1_000_000,
            factor_nodes: 20_000_000,
            automorphisms: 10,
            embed_nodes: 1_000_000,
            connector_candidates: 100_000,
        }
    }
}

impl Caps {
    pub fn to_map(&self) -> BTreeMap<String, usize> {
        [
            ("alpha_exact", self.alpha_exact),
            ("partition_enum", self.partition_enum),
            ("arboricity", self.arboricity),
            ("factor_host", self.factor_host),
            ("copies", self.copies),
            ("factor_nodes", self.factor_nodes),
            ("automorphisms", self.automorphisms),
            ("embed_nodes", self.embed_nodes),
            ("connector_candidates", self.connector_candidates),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect()
    }

    pub fn set(&mut self, key: &str, value: usize) -> Result<()> {
        let slot = match key {
            "alpha_exact" => &mut self.alpha_exact,
            "partition_enum" => &mut self.partition_enum,
            "arboricity" => &mut self.arboricity,
            "factor_host" => &mut self.factor_host,
            "copies" => &mut self.copies,
            "factor_nodes" => &mut self.factor_nodes,
            "automorphisms" => &mut self.automorphisms,
            "embed_nodes" => &mut self.embed_nodes,
            "connector_candidates" => &mut self.connector_candidates,
            _ => return Err(Error::Invalid(format!("unknown cap {key:?}"))),
        };
        *slot = value;
        Ok(())
    }

    /// Applies overrides written as `key=value,key=value`.
    pub fn apply_overrides(&mut self, text: &str) -> Result<()> {
        for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::Invalid(format!("cap override {item:?} is not key=value")))?;
            let value: usize = value
                .trim()
                .parse()
                .map_err(|_| Error::Invalid(format!("cap value in {item:?} is not an integer")))?;
            self.set(key.trim(), value)?;
        }
        Ok(())
    }
}
