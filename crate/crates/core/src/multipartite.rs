//! The target graph as a complete multipartite specification, the exact
//! "does the complement contain it" search, and the two clique-based
//! extremal constructions.

use crate::bits::VertexSet;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::search::{Budget, SearchResult};
use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Complete multipartite target with part sizes stored sorted ascending.
/// All operations address parts by sorted index only.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SpecRepr", into = "SpecRepr")]
pub struct MultipartiteSpec {
    parts: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct SpecRepr {
    parts: Vec<usize>,
}

impl TryFrom<SpecRepr> for MultipartiteSpec {
    type Error = Error;
    fn try_from(r: SpecRepr) -> Result<Self> {
        MultipartiteSpec::new(r.parts)
    }
}

impl From<MultipartiteSpec> for SpecRepr {
    fn from(s: MultipartiteSpec) -> SpecRepr {
        SpecRepr { parts: s.parts }
    }
}

impl MultipartiteSpec {
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::invalid("a multipartite spec needs at least one part"));
        }
        if parts.iter().any(|&p| p == 0) {
            return Err(Error::invalid("part sizes must be positive"));
        }
        parts.sort_unstable();
        Ok(MultipartiteSpec { parts })
    }

    /// K_k, the complete graph on k vertices (k parts of size one).
    pub fn clique(k: usize) -> Self {
        MultipartiteSpec::new(vec![1; k]).unwrap()
    }

    /// Part sizes, sorted ascending.
    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Chromatic number: the number of parts.
    pub fn chi(&self) -> usize {
        self.parts.len()
    }

    /// Minimum colour class size: the smallest part.
    pub fn sigma(&self) -> usize {
        self.parts[0]
    }

    /// Total number of vertices.
    pub fn order(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Average part size as an exact rational.
    pub fn avg_part(&self) -> Ratio<i64> {
        Ratio::new(self.order() as i64, self.chi() as i64)
    }

    /// Spec induced by the selected parts (0-based sorted indices), re-sorted.
    pub fn sub_join(&self, part_indices: &[usize]) -> Result<MultipartiteSpec> {
        if part_indices.is_empty() {
            return Err(Error::invalid("sub_join needs a non-empty part selection"));
        }
        let mut chosen = Vec::new();
        let mut seen = vec![false; self.parts.len()];
        for &i in part_indices {
            if i >= self.parts.len() {
                return Err(Error::invalid(format!("part index {} out of range", i)));
            }
            if !seen[i] {
                seen[i] = true;
                chosen.push(self.parts[i]);
            }
        }
        MultipartiteSpec::new(chosen)
    }

    /// The `t` smallest parts.
    pub fn smallest_parts(&self, t: usize) -> Result<MultipartiteSpec> {
        if t == 0 || t > self.parts.len() {
            return Err(Error::invalid(format!("cannot take {} smallest parts", t)));
        }
        MultipartiteSpec::new(self.parts[..t].to_vec())
    }

    /// Drops one part whose size is the second smallest value (sorted index 1).
    pub fn drop_second_smallest(&self) -> Result<MultipartiteSpec> {
        if self.parts.len() < 2 {
            return Err(Error::invalid("need at least two parts to drop one"));
        }
        let mut p = self.parts.clone();
        p.remove(1);
        MultipartiteSpec::new(p)
    }

    /// Pads every part below `floor` up to `floor`; used when a pipeline
    /// needs a minimum part size. Freeness is preserved: the padded spec is a
    /// supergraph of the original.
    pub fn pad_parts_to(&self, floor: usize) -> MultipartiteSpec {
        let parts = self.parts.iter().map(|&p| p.max(floor)).collect();
        MultipartiteSpec::new(parts).unwrap()
    }
}

impl fmt::Display for MultipartiteSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.iter().all(|&p| p == 1) {
            return write!(f, "K_{}", self.parts.len());
        }
        let body: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "K_{{{}}}", body.join(","))
    }
}

impl FromStr for MultipartiteSpec {
    type Err = Error;

    /// Accepts `K_5`, `K_{2,3}`, `K_{1,1,2}` and bare part lists like `2,3`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let body = if let Some(rest) = s.strip_prefix("K_").or_else(|| s.strip_prefix("k_")) {
            if let Some(inner) = rest.strip_prefix('{') {
                inner
                    .strip_suffix('}')
                    .ok_or_else(|| Error::parse("unterminated '{' in spec"))?
            } else {
                // K_5 means the 5-clique.
                let k: usize =
                    rest.parse().map_err(|_| Error::parse(format!("bad clique size '{}'", rest)))?;
                if k == 0 {
                    return Err(Error::parse("clique size must be positive"));
                }
                return Ok(MultipartiteSpec::clique(k));
            }
        } else {
            s
        };
        let parts: Result<Vec<usize>> = body
            .split(',')
            .map(|p| {
                let p = p.trim();
                p.parse::<usize>().map_err(|_| Error::parse(format!("bad part size '{}'", p)))
            })
            .collect();
        MultipartiteSpec::new(parts?)
    }
}

/// Witness that the complement of a host graph contains the spec: one vertex
/// class per part, with no host edge between distinct classes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Embedding {
    pub classes: Vec<VertexSet>,
}

impl Embedding {
    /// Exact re-verification against the host graph.
    pub fn verify(&self, g: &Graph, spec: &MultipartiteSpec) -> Result<()> {
        if self.classes.len() != spec.chi() {
            return Err(Error::invalid("class count does not match spec"));
        }
        let mut sizes: Vec<usize> = self.classes.iter().map(|c| c.len()).collect();
        sizes.sort_unstable();
        if sizes != spec.parts() {
            return Err(Error::invalid(format!(
                "class sizes {:?} do not match parts {:?}",
                sizes,
                spec.parts()
            )));
        }
        for (i, a) in self.classes.iter().enumerate() {
            for v in a.iter() {
                g.check_vertex(v)?;
            }
            for b in self.classes.iter().skip(i + 1) {
                if !a.is_disjoint(b) {
                    return Err(Error::invalid("classes overlap"));
                }
                for u in a.iter() {
                    for v in b.iter() {
                        if g.has_edge(u, v) {
                            return Err(Error::invalid(format!(
                                "host edge {}-{} crosses classes",
                                u, v
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Searches for the spec in the complement of `g`: `chi` disjoint classes of
/// the given sizes with no `g`-edge between distinct classes.
///
/// Backtracking CSP: classes are assigned in descending size order with
/// forward-checking on the no-cross-edge constraint. Symmetry is broken by
/// choosing class members in increasing id order and, among equal-size
/// classes, requiring their first vertices to increase.
pub fn complement_contains(
    g: &Graph,
    spec: &MultipartiteSpec,
    budget: &mut Budget,
) -> SearchResult<Embedding> {
    let n = g.vertex_count();
    if spec.order() > n {
        return SearchResult::NoneFound;
    }
    let mut sizes: Vec<usize> = spec.parts().to_vec();
    sizes.reverse(); // descending
    let mut classes: Vec<Vec<usize>> = vec![Vec::new(); sizes.len()];
    let allowed = VertexSet::full(n);
    if assign_class(g, &sizes, 0, &allowed, &mut classes, budget) {
        let classes = classes
            .into_iter()
            .map(|c| VertexSet::from_iter_n(n, c))
            .collect();
        let emb = Embedding { classes };
        debug_assert!(emb.verify(g, spec).is_ok());
        SearchResult::Found(emb)
    } else if budget.is_exhausted() {
        SearchResult::BudgetExhausted
    } else {
        SearchResult::NoneFound
    }
}

fn assign_class(
    g: &Graph,
    sizes: &[usize],
    ci: usize,
    allowed: &VertexSet,
    classes: &mut Vec<Vec<usize>>,
    budget: &mut Budget,
) -> bool {
    if ci == sizes.len() {
        return true;
    }
    // Equal-size classes are interchangeable; force first vertices ascending.
    let min_start = if ci > 0 && sizes[ci] == sizes[ci - 1] {
        classes[ci - 1].first().map_or(0, |&v| v + 1)
    } else {
        0
    };
    pick_members(g, sizes, ci, min_start, allowed, classes, budget)
}

fn pick_members(
    g: &Graph,
    sizes: &[usize],
    ci: usize,
    min_id: usize,
    allowed: &VertexSet,
    classes: &mut Vec<Vec<usize>>,
    budget: &mut Budget,
) -> bool {
    if classes[ci].len() == sizes[ci] {
        // Class complete: future classes must avoid it and its neighbours.
        let mut next_allowed = allowed.clone();
        for &v in &classes[ci] {
            next_allowed.remove(v);
            next_allowed.subtract(&g.neighbors(v));
        }
        let remaining: usize = sizes[ci + 1..].iter().sum();
        if next_allowed.len() < remaining {
            return false;
        }
        return assign_class(g, sizes, ci + 1, &next_allowed, classes, budget);
    }
    if !budget.spend(1) {
        return false;
    }
    let need = sizes[ci] - classes[ci].len();
    let candidates: Vec<usize> = allowed.iter().filter(|&v| v >= min_id).collect();
    if candidates.len() < need {
        return false;
    }
    for (pos, &v) in candidates.iter().enumerate() {
        if candidates.len() - pos < need {
            break;
        }
        classes[ci].push(v);
        if pick_members(g, sizes, ci, v + 1, allowed, classes, budget) {
            return true;
        }
        classes[ci].pop();
        if budget.is_exhausted() {
            return false;
        }
    }
    false
}

/// The clique construction: `chi-1` disjoint copies of K_{n-1} plus one
/// disjoint K_{sigma-1}. It is C_n-free with spec-free complement and has
/// exactly `(n-1)(chi-1) + sigma - 1` vertices.
pub fn burr_graph(n: usize, spec: &MultipartiteSpec) -> Result<Graph> {
    if n < spec.sigma() {
        return Err(Error::Precondition(format!(
            "burr construction needs n >= sigma, got n={} sigma={}",
            n,
            spec.sigma()
        )));
    }
    let mut sizes = vec![n - 1; spec.chi() - 1];
    sizes.push(spec.sigma() - 1);
    Ok(Graph::disjoint_cliques(&sizes))
}

/// The k-clique construction showing the cycle length must be close to the
/// spec order: k disjoint copies of K_{n-1} where n = (1-eps)mk, paired with
/// the spec of one part of size n and k-1 parts of size eps*mk/(k-1).
///
/// eps is an exact fraction and both derived sizes must be integers; nothing
/// is rounded silently.
pub fn cliques_lower_bound_graph(
    m: usize,
    k: usize,
    eps: Ratio<i64>,
) -> Result<(Graph, MultipartiteSpec)> {
    if k < 2 {
        return Err(Error::Precondition("need k >= 2".into()));
    }
    if eps <= Ratio::from_integer(0) || eps > Ratio::new(1, 4) {
        return Err(Error::Precondition("need 0 < eps <= 1/4".into()));
    }
    let mk = Ratio::from_integer((m * k) as i64);
    let n_rat = (Ratio::from_integer(1) - eps) * mk;
    if !n_rat.is_integer() {
        return Err(Error::invalid(format!("(1-eps)mk = {} is not an integer", n_rat)));
    }
    let small_rat = eps * mk / Ratio::from_integer((k - 1) as i64);
    if !small_rat.is_integer() {
        return Err(Error::invalid(format!("eps*mk/(k-1) = {} is not an integer", small_rat)));
    }
    let n = n_rat.to_integer() as usize;
    let small = small_rat.to_integer() as usize;
    if small == 0 {
        return Err(Error::invalid("eps*mk/(k-1) must be positive"));
    }
    let g = Graph::disjoint_cliques(&vec![n - 1; k]);
    let mut parts = vec![small; k - 1];
    parts.push(n);
    let spec = MultipartiteSpec::new(parts)?;
    Ok((g, spec))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_basics() {
        let s = MultipartiteSpec::new(vec![3, 1, 2]).unwrap();
        assert_eq!(s.parts(), &[1, 2, 3]);
        assert_eq!(s.chi(), 3);
        assert_eq!(s.sigma(), 1);
        assert_eq!(s.order(), 6);
        assert_eq!(s.avg_part(), Ratio::new(2, 1));
    }

    #[test]
    fn parse_shorthand() {
        assert_eq!("K_3".parse::<MultipartiteSpec>().unwrap(), MultipartiteSpec::clique(3));
        assert_eq!(
            "K_{2,3}".parse::<MultipartiteSpec>().unwrap(),
            MultipartiteSpec::new(vec![2, 3]).unwrap()
        );
        assert_eq!(
            "3,1,2".parse::<MultipartiteSpec>().unwrap(),
            MultipartiteSpec::new(vec![1, 2, 3]).unwrap()
        );
        assert!("K_{2,".parse::<MultipartiteSpec>().is_err());
        assert!("K_0".parse::<MultipartiteSpec>().is_err());
        assert!("".parse::<MultipartiteSpec>().is_err());
    }

    #[test]
    fn display_roundtrip() {
        for s in ["K_3", "K_{2,3}", "K_{1,1,4}"] {
            let spec: MultipartiteSpec = s.parse().unwrap();
            assert_eq!(spec.to_string().parse::<MultipartiteSpec>().unwrap(), spec);
        }
    }

    #[test]
    fn sub_join_cases() {
        let s = MultipartiteSpec::new(vec![1, 2, 3]).unwrap();
        assert_eq!(s.sub_join(&[0, 1]).unwrap().parts(), &[1, 2]);
        assert!(s.sub_join(&[]).is_err());
        let t = MultipartiteSpec::new(vec![2, 2, 2]).unwrap();
        assert_eq!(t.drop_second_smallest().unwrap().parts(), &[2, 2]);
        let u = MultipartiteSpec::new(vec![1, 3, 5, 7]).unwrap();
        assert_eq!(u.smallest_parts(2).unwrap().parts(), &[1, 3]);
    }

    #[test]
    fn contains_in_empty_graph() {
        let spec = MultipartiteSpec::new(vec![1, 2, 2]).unwrap();
        let g = Graph::new(spec.order());
        let mut b = Budget::unlimited();
        let emb = complement_contains(&g, &spec, &mut b).found().unwrap();
        emb.verify(&g, &spec).unwrap();
    }

    #[test]
    fn complement_of_two_cliques_is_triangle_free() {
        // complement(2xK_4) = K_{4,4}, and K_{4,4} has no triangle: any three
        // host vertices include two in the same clique, hence adjacent.
        let host = Graph::disjoint_cliques(&[4, 4]);
        let spec = MultipartiteSpec::clique(3);
        let mut b = Budget::unlimited();
        assert!(complement_contains(&host, &spec, &mut b).is_none_found());
    }

    #[test]
    fn c5_contains_k12_in_complement() {
        let g = Graph::cycle(5);
        let spec = MultipartiteSpec::new(vec![1, 2]).unwrap();
        let mut b = Budget::unlimited();
        let emb = complement_contains(&g, &spec, &mut b).found().unwrap();
        emb.verify(&g, &spec).unwrap();
    }

    #[test]
    fn budget_exhaustion_distinct() {
        let g = Graph::complete(8);
        let spec = MultipartiteSpec::new(vec![2, 2]).unwrap();
        let mut b = Budget::new(1);
        assert_eq!(complement_contains(&g, &spec, &mut b), SearchResult::BudgetExhausted);
        // With budget, the absence is exact: K_8 complement has no edges.
        let mut b = Budget::unlimited();
        assert!(complement_contains(&g, &spec, &mut b).is_none_found());
    }

    #[test]
    fn burr_graph_shapes() {
        let g = burr_graph(5, &MultipartiteSpec::clique(3)).unwrap();
        assert_eq!(g.vertex_count(), 8);
        assert_eq!(g.components().len(), 2);

        let g = burr_graph(4, &MultipartiteSpec::new(vec![1, 1]).unwrap()).unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 3);

        let spec = MultipartiteSpec::new(vec![2, 3]).unwrap();
        let g = burr_graph(6, &spec).unwrap();
        assert_eq!(g.vertex_count(), 6); // (6-1)(1) + 2 - 1
        let mut b = Budget::unlimited();
        assert!(g.find_cycle_of_length(6, &mut b).is_none_found());
        assert!(complement_contains(&g, &spec, &mut b).is_none_found());

        assert!(burr_graph(1, &spec).is_err());
    }

    #[test]
    fn lower_bound_construction() {
        let (g, spec) = cliques_lower_bound_graph(4, 2, Ratio::new(1, 4)).unwrap();
        // n = 6, G = 2xK_5, parts (2,6).
        assert_eq!(g.vertex_count(), 10);
        assert_eq!(spec.parts(), &[2, 6]);
        let mut b = Budget::unlimited();
        assert!(g.find_cycle_of_length(6, &mut b).is_none_found());
        assert!(complement_contains(&g, &spec, &mut b).is_none_found());
        // Order comparison: k(n-1) > (k-1)(n-1) + sigma.
        assert!(g.vertex_count() > (spec.chi() - 1) * 5 + spec.sigma());

        assert!(cliques_lower_bound_graph(4, 2, Ratio::new(1, 3)).is_err());
        assert!(cliques_lower_bound_graph(5, 2, Ratio::new(1, 4)).is_err()); // non-integral
    }

    #[test]
    fn contains_monotone_under_sub_join() {
        let g = Graph::cycle(7);
        let spec = MultipartiteSpec::new(vec![1, 1, 2]).unwrap();
        let mut b = Budget::unlimited();
        if complement_contains(&g, &spec, &mut b).is_found() {
            for idx in [vec![0], vec![1], vec![0, 1], vec![1, 2], vec![0, 1, 2]] {
                let sub = spec.sub_join(&idx).unwrap();
                let mut b = Budget::unlimited();
                assert!(
                    complement_contains(&g, &sub, &mut b).is_found(),
                    "sub_join {:?} not found",
                    idx
                );
            }
        }
    }
}
