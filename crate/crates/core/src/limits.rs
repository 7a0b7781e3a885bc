use std::str::FromStr;

/// Work and size caps for the explicit (enumerating) code paths.
///
/// Formula evaluation is never capped; these only guard operations whose
/// cost grows with the number of sets or subsets they touch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Maximum |F|² accepted by the pairwise intersection loop.
    pub pair_budget: u128,
    /// Maximum number of subsets returned by transversal enumeration.
    pub transversal_cap: u128,
    /// Maximum number of candidate subsets scanned by any enumeration of `[n]`.
    pub scan_cap: u128,
    /// Maximum number of members in an explicitly built family.
    pub family_cap: u128,
    /// Backtracking nodes allowed in a single sunflower search.
    pub sunflower_nodes: u64,
    /// Largest ground set accepted by exact canonicalization.
    pub canon_max_n: usize,
    /// Maximum number of relabelings tried by exact canonicalization.
    pub canon_max_perms: u128,
    /// Maximum number of k-sets (graph vertices) in exhaustive search. Hard ceiling 128.
    pub search_max_vertices: usize,
    /// Maximum number of maximal families visited before a search is declared partial.
    pub search_max_families: u64,
    /// Maximum number of sequences the branching process may create.
    pub branching_max_sequences: u64,
    /// Worker threads for the search fan-out; 0 means the rayon default.
    pub threads: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            pair_budget: 100_000_000,
            transversal_cap: 5_000_000,
            scan_cap: 200_000_000,
            family_cap: 5_000_000,
            sunflower_nodes: 50_000_000,
            canon_max_n: 12,
            canon_max_perms: 20_000_000,
            search_max_vertices: 100,
            search_max_families: 50_000_000,
            branching_max_sequences: 5_000_000,
            threads: 0,
        }
    }
}

impl Limits {
    /// Applies overrides written as `key=value` pairs separated by commas.
    /// A bare integer sets `search_max_families`.
    pub fn apply_overrides(&mut self, spec: &str) -> Result<(), String> {
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let Some((key, value)) = item.split_once('=') else {
                self.search_max_families = parse(item)?;
                continue;
            };
            let value = value.trim();
            match key.trim() {
                "pair_budget" => self.pair_budget = parse(value)?,
                "transversal_cap" => self.transversal_cap = parse(value)?,
                "scan_cap" => self.scan_cap = parse(value)?,
                "family_cap" => self.family_cap = parse(value)?,
                "sunflower_nodes" => self.sunflower_nodes = parse(value)?,
                "canon_max_n" => self.canon_max_n = parse(value)?,
                "canon_max_perms" => self.canon_max_perms = parse(value)?,
                "search_max_vertices" => self.search_max_vertices = parse(value)?,
                "search_max_families" => self.search_max_families = parse(value)?,
                "branching_max_sequences" => self.branching_max_sequences = parse(value)?,
                "threads" => self.threads = parse(value)?,
                other => return Err(format!("unknown budget key `{other}`")),
            }
        }
        Ok(())
    }
}

fn parse<T: FromStr>(s: &str) -> Result<T, String> {
    s.parse().map_err(|_| format!("cannot parse budget value `{s}`"))
}
