//! Orbit minimization of word tuples under Whitehead automorphisms, the
//! minimal level graph, stabilizer presentations, and the derived
//! partial-basis decision and basis-extension procedures.
//!
//! Minimization is greedy single-move descent: while some Whitehead
//! automorphism strictly decreases the total length, apply the one with the
//! largest decrease (first in canonical order on ties). Peak reduction
//! guarantees the greedy minimum is the orbit minimum; the test suite
//! cross-checks this against a brute-force BFS oracle at desk scale.

use crate::autos::{
    enumerate_lambda, enumerate_omega, Automorphism, NamedGenerator, SignedPerm, WhiteheadAuto,
};
use crate::error::{Error, Result};
use crate::freegroup::{Letter, ReducedWord, WordTuple};
use serde::Serialize;
use std::collections::{BTreeMap, HashMap, VecDeque};

/// Resource limits for level-graph search. Overflow is reported, never
/// silently truncated.
#[derive(Clone, Copy, Debug)]
pub struct Budget {
    pub max_vertices: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_vertices: 1_000_000,
        }
    }
}

/// The moves used by orbit searches: all nontrivial `(A; a)` plus all of
/// `Omega(F_n)`, in canonical order. Only the `(A; a)` part can change
/// lengths, which `minimize` exploits.
fn length_moves(rank: usize) -> Vec<WhiteheadAuto> {
    enumerate_lambda(rank)
        .into_iter()
        .filter(|w| match w {
            WhiteheadAuto::Lambda { set, .. } => set.len() > 1,
            WhiteheadAuto::Perm(_) => false,
        })
        .collect()
}

fn all_moves(rank: usize) -> Vec<WhiteheadAuto> {
    let mut moves = length_moves(rank);
    moves.extend(enumerate_omega(rank).into_iter().map(WhiteheadAuto::Perm));
    moves
}

// ---------------------------------------------------------------------------
// Minimization
// ---------------------------------------------------------------------------

/// Greedy descent to a tuple of minimal total length in the `Aut(F_n)`-orbit
/// of `tuple`, together with an automorphism `phi` (built from Whitehead
/// generators) such that `phi(tuple)` is the returned tuple.
pub fn minimize(tuple: &WordTuple) -> (WordTuple, Automorphism) {
    let rank = tuple.rank();
    let moves = length_moves(rank);
    let mut current = tuple.clone();
    let mut phi = Automorphism::identity(rank);
    loop {
        let len = current.total_length();
        let mut best: Option<(usize, &WhiteheadAuto, WordTuple)> = None;
        for mv in &moves {
            let image = mv.apply_tuple(&current);
            let l = image.total_length();
            if l < len && best.as_ref().is_none_or(|(bl, _, _)| l < *bl) {
                best = Some((l, mv, image));
            }
        }
        match best {
            Some((_, mv, image)) => {
                phi = mv
                    .to_automorphism()
                    .compose(&phi)
                    .expect("equal ranks by construction");
                current = image;
            }
            None => return (current, phi),
        }
    }
}

// ---------------------------------------------------------------------------
// Level graph
// ---------------------------------------------------------------------------

/// A directed edge representative `phi(vertices[from]) = vertices[to]`.
/// Together with its reverse `(to, from, phi^{-1})` it stands for one 1-cell.
#[derive(Clone, Debug)]
pub struct LevelEdge {
    pub from: usize,
    pub to: usize,
    pub label: WhiteheadAuto,
}

/// The minimal level of an orbit: all tuples of minimal total length, with
/// an edge for every Whitehead automorphism carrying one vertex to another.
#[derive(Clone, Debug)]
pub struct LevelGraph {
    rank: usize,
    basepoint: usize,
    vertices: Vec<WordTuple>,
    edges: Vec<LevelEdge>,
}

impl LevelGraph {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn basepoint(&self) -> usize {
        self.basepoint
    }

    pub fn vertices(&self) -> &[WordTuple] {
        &self.vertices
    }

    pub fn edges(&self) -> &[LevelEdge] {
        &self.edges
    }

    pub fn vertex_index(&self, t: &WordTuple) -> Option<usize> {
        self.vertices.iter().position(|v| v == t)
    }
}

/// BFS closure of a minimal tuple under all length-preserving Whitehead
/// moves. Errors if `base` is not already of minimal total length, or if the
/// vertex budget is exhausted.
pub fn level_graph(base: &WordTuple, budget: Budget) -> Result<LevelGraph> {
    let rank = base.rank();
    let moves = all_moves(rank);
    let len = base.total_length();
    if length_moves(rank)
        .iter()
        .any(|mv| mv.apply_tuple(base).total_length() < len)
    {
        return Err(Error::InvalidParameters(
            "tuple is not of minimal total length; minimize first".into(),
        ));
    }

    let mut vertices = vec![base.clone()];
    let mut index: HashMap<WordTuple, usize> = HashMap::from([(base.clone(), 0)]);
    let mut queue = VecDeque::from([0usize]);
    // canonical directed representative of each 1-cell
    let mut cells: BTreeMap<(usize, usize, WhiteheadAuto), ()> = BTreeMap::new();

    while let Some(vi) = queue.pop_front() {
        for mv in &moves {
            let image = mv.apply_tuple(&vertices[vi]);
            if image.total_length() != len {
                continue;
            }
            let wi = match index.get(&image) {
                Some(&w) => w,
                None => {
                    if vertices.len() >= budget.max_vertices {
                        return Err(Error::BudgetExceeded {
                            what: "level graph vertices".into(),
                            cap: budget.max_vertices,
                        });
                    }
                    let w = vertices.len();
                    vertices.push(image.clone());
                    index.insert(image.clone(), w);
                    queue.push_back(w);
                    w
                }
            };
            // identify (v, w, phi) with (w, v, phi^{-1})
            let fwd = (vi, wi, mv.clone());
            let rev = (wi, vi, mv.inverse());
            let key = fwd.min(rev);
            cells.entry(key).or_insert(());
        }
    }

    Ok(LevelGraph {
        rank,
        basepoint: 0,
        vertices,
        edges: cells
            .into_keys()
            .map(|(from, to, label)| LevelEdge { from, to, label })
            .collect(),
    })
}

// ---------------------------------------------------------------------------
// Partial bases
// ---------------------------------------------------------------------------

/// Canonical set form: sorted, deduplicated.
fn canonical_set(words: &[ReducedWord], rank: usize) -> Result<Vec<ReducedWord>> {
    let mut sorted = Vec::with_capacity(words.len());
    for w in words {
        if w.rank() != rank {
            return Err(Error::RankMismatch {
                left: rank,
                right: w.rank(),
            });
        }
        sorted.push(w.clone());
    }
    sorted.sort();
    sorted.dedup();
    Ok(sorted)
}

/// Letters of a minimal tuple, if every entry is a single letter.
fn as_letters(t: &WordTuple) -> Option<Vec<Letter>> {
    t.entries().iter().map(|w| w.is_single_letter()).collect()
}

fn distinct_orbits(letters: &[Letter]) -> bool {
    let mut seen = std::collections::HashSet::new();
    letters.iter().all(|l| seen.insert(l.index()))
}

/// A tuple is "standard" when its entries are single letters in pairwise
/// distinct generator orbits.
fn is_standard(t: &WordTuple) -> bool {
    as_letters(t).is_some_and(|ls| distinct_orbits(&ls))
}

/// Decide whether a set of words is a partial basis: minimize the tuple and
/// accept iff the minimum is a standard letter tuple. When the greedy
/// minimum has the right length but repeated orbits, the whole minimal level
/// is searched for a standard vertex before answering no.
pub fn is_partial_basis(words: &[ReducedWord], rank: usize) -> Result<bool> {
    is_partial_basis_budgeted(words, rank, Budget::default())
}

pub fn is_partial_basis_budgeted(
    words: &[ReducedWord],
    rank: usize,
    budget: Budget,
) -> Result<bool> {
    let set = canonical_set(words, rank)?;
    if set.is_empty() {
        return Err(Error::InvalidParameters(
            "a partial basis must be nonempty".into(),
        ));
    }
    if set.len() > rank {
        return Err(Error::TooManyWords {
            size: set.len(),
            rank,
        });
    }
    let tuple = WordTuple::new(set.clone(), rank)?;
    let (min_tuple, _) = minimize(&tuple);
    if min_tuple.total_length() != set.len() {
        return Ok(false);
    }
    if is_standard(&min_tuple) {
        return Ok(true);
    }
    // Orbit confirmation through the minimal level.
    let graph = level_graph(&min_tuple, budget)?;
    Ok(graph.vertices().iter().any(is_standard))
}

/// Certificate for `extend_to_basis`: an automorphism `phi` mapping the
/// `i`-th word of the sorted set to `v_i`. The preimages of `v_1..v_n` under
/// `phi` then form a basis containing the set.
pub fn extend_to_basis(words: &[ReducedWord], rank: usize) -> Result<Automorphism> {
    let set = canonical_set(words, rank)?;
    if set.is_empty() {
        return Err(Error::InvalidParameters(
            "a partial basis must be nonempty".into(),
        ));
    }
    if set.len() > rank {
        return Err(Error::TooManyWords {
            size: set.len(),
            rank,
        });
    }
    let tuple = WordTuple::new(set.clone(), rank)?;
    let (min_tuple, phi) = minimize(&tuple);
    let letters = match as_letters(&min_tuple) {
        Some(ls) if distinct_orbits(&ls) => ls,
        _ => {
            return Err(Error::NotPartialBasis {
                reason: format!(
                    "minimal total length {} for {} words, minimal tuple {}",
                    min_tuple.total_length(),
                    set.len(),
                    min_tuple
                ),
            })
        }
    };
    // Signed permutation sending the i-th minimal letter to v_i.
    let mut images = vec![0i32; rank];
    for (i, l) in letters.iter().enumerate() {
        images[l.index() - 1] = (i as i32 + 1) * l.sign();
    }
    let mut next = letters.len() as i32;
    for slot in images.iter_mut() {
        if *slot == 0 {
            next += 1;
            *slot = next;
        }
    }
    let relabel = Automorphism::from_perm(&SignedPerm::new(images)?);
    relabel.compose(&phi)
}

// ---------------------------------------------------------------------------
// Stabilizer presentations
// ---------------------------------------------------------------------------

/// A generator of the stabilizer presentation: a non-tree 1-cell, realized
/// as the automorphism of the based loop through the spanning tree.
#[derive(Clone, Debug)]
pub struct StabGenerator {
    pub edge: usize,
    pub name: String,
    pub realized: Automorphism,
}

/// A relator: the boundary word of one attached 2-cell, rewritten over the
/// non-tree generators (tree edges contribute nothing).
#[derive(Clone, Debug)]
pub struct StabRelator {
    pub base_vertex: usize,
    pub family: String,
    pub side_conditions: String,
    /// (generator index, inverted) in traversal order.
    pub word: Vec<(usize, bool)>,
}

#[derive(Clone, Debug)]
pub struct StabilizerPresentation {
    pub graph: LevelGraph,
    /// edge indices of the spanning tree
    pub tree_edges: Vec<usize>,
    pub generators: Vec<StabGenerator>,
    pub relators: Vec<StabRelator>,
    /// number of 2-cells attached (one relator each)
    pub two_cells: usize,
}

/// Canonical move form of a relator token, so path labels can be looked up
/// in the level graph. The trivial `({a}; a)` collapses to the identity
/// permutation, matching the move enumeration.
fn token_move(tok: &NamedGenerator, rank: usize) -> WhiteheadAuto {
    match tok {
        NamedGenerator::Whitehead(set, a) => {
            if set.len() == 1 {
                WhiteheadAuto::Perm(SignedPerm::identity(rank))
            } else {
                WhiteheadAuto::Lambda {
                    set: *set,
                    multiplier: *a,
                }
            }
        }
        NamedGenerator::Perm(p) => WhiteheadAuto::Perm(p.clone()),
        NamedGenerator::SmallW(a, b) => {
            let mut images: Vec<i32> = (1..=rank as i32).collect();
            // a -> b^{-1}, b -> a
            images[a.index() - 1] = if a.is_positive() {
                -b.signed()
            } else {
                b.signed()
            };
            images[b.index() - 1] = if b.is_positive() {
                a.signed()
            } else {
                -a.signed()
            };
            WhiteheadAuto::Perm(SignedPerm::new(images).expect("swap is a signed permutation"))
        }
        NamedGenerator::E(a, b) => WhiteheadAuto::lambda(
            crate::autos::LetterSet::from_letters([*a, *b], rank),
            *b,
        )
        .expect("E is well-formed"),
        NamedGenerator::M(a, b) => WhiteheadAuto::lambda(
            crate::autos::LetterSet::from_letters([a.inverse(), b.inverse()], rank),
            b.inverse(),
        )
        .expect("M is well-formed"),
    }
}

/// Build the McCool presentation of the stabilizer of a minimal tuple:
/// level graph, spanning tree (preferring permutation-labelled edges),
/// generators from the non-tree 1-cells, and a relator for every closed
/// edge path reading a relator of type R1-R10.
pub fn stabilizer_presentation(
    base: &WordTuple,
    budget: Budget,
) -> Result<StabilizerPresentation> {
    use crate::presentations::{enumerate_relations, Context, Family};

    let rank = base.rank();
    let graph = level_graph(base, budget)?;
    let nv = graph.vertices().len();

    // adjacency: vertex -> (edge index, forward?), permutation labels first
    let mut adj: Vec<Vec<(usize, bool)>> = vec![Vec::new(); nv];
    for (ei, e) in graph.edges().iter().enumerate() {
        adj[e.from].push((ei, true));
        if e.from != e.to {
            adj[e.to].push((ei, false));
        }
    }
    for list in &mut adj {
        list.sort_by_key(|(ei, fwd)| {
            let perm_first = match graph.edges()[*ei].label {
                WhiteheadAuto::Perm(_) => 0,
                WhiteheadAuto::Lambda { .. } => 1,
            };
            (perm_first, *ei, !*fwd)
        });
    }

    // spanning tree by BFS from the basepoint
    let mut parent: Vec<Option<(usize, bool)>> = vec![None; nv];
    let mut seen = vec![false; nv];
    seen[graph.basepoint()] = true;
    let mut queue = VecDeque::from([graph.basepoint()]);
    let mut tree_edges = Vec::new();
    while let Some(v) = queue.pop_front() {
        for &(ei, fwd) in &adj[v] {
            let e = &graph.edges()[ei];
            let w = if fwd { e.to } else { e.from };
            if !seen[w] {
                seen[w] = true;
                parent[w] = Some((ei, fwd));
                tree_edges.push(ei);
                queue.push_back(w);
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::InvalidParameters(
            "level graph is disconnected from the basepoint".into(),
        ));
    }

    let is_tree: Vec<bool> = {
        let mut t = vec![false; graph.edges().len()];
        for &ei in &tree_edges {
            t[ei] = true;
        }
        t
    };

    // walk from v to the basepoint through the tree, composing edge labels
    let edge_label = |ei: usize, fwd: bool| -> WhiteheadAuto {
        let e = &graph.edges()[ei];
        if fwd {
            e.label.clone()
        } else {
            e.label.inverse()
        }
    };
    let path_to_base = |mut v: usize| -> Automorphism {
        // returns the automorphism realizing the walk v -> basepoint
        let mut total = Automorphism::identity(rank);
        while let Some((ei, fwd)) = parent[v] {
            // parent edge was traversed (fwd) when discovering v, so walking
            // back to the base uses the reverse direction
            let lbl = edge_label(ei, !fwd);
            total = total
                .compose(&lbl.to_automorphism())
                .expect("equal ranks");
            v = if fwd {
                graph.edges()[ei].from
            } else {
                graph.edges()[ei].to
            };
        }
        total
    };

    // generators: non-tree edges as based loops
    let mut generators = Vec::new();
    let mut gen_of_edge: HashMap<usize, usize> = HashMap::new();
    for (ei, e) in graph.edges().iter().enumerate() {
        if is_tree[ei] {
            continue;
        }
        let to_base_from_target = path_to_base(e.to);
        let base_to_source = path_to_base(e.from).invert()?;
        let realized = to_base_from_target
            .compose(&e.label.to_automorphism())?
            .compose(&base_to_source)?;
        debug_assert_eq!(realized.apply_tuple(base), *base);
        gen_of_edge.insert(ei, generators.len());
        generators.push(StabGenerator {
            edge: ei,
            name: format!("g{}", generators.len()),
            realized,
        });
    }

    // directed-edge lookup: (from, to, label) -> (edge, forward?)
    let mut directed: HashMap<(usize, usize, WhiteheadAuto), (usize, bool)> = HashMap::new();
    for (ei, e) in graph.edges().iter().enumerate() {
        directed
            .entry((e.from, e.to, e.label.clone()))
            .or_insert((ei, true));
        directed
            .entry((e.to, e.from, e.label.inverse()))
            .or_insert((ei, false));
    }

    // 2-cells: trace every R1-R10 relator word from every vertex; a closed
    // path entirely inside the level attaches one cell.
    let ctx = Context::plain(rank, 0);
    let mut relators = Vec::new();
    let mut two_cells = 0;
    for family in [
        Family::R1,
        Family::R2,
        Family::R3,
        Family::R4,
        Family::R5,
        Family::R6,
        Family::R7,
        Family::R8,
        Family::R9,
        Family::R10,
    ] {
        for inst in enumerate_relations(family, &ctx)? {
            let tokens = inst.relator();
            let moves: Vec<WhiteheadAuto> =
                tokens.iter().map(|t| token_move(t, rank)).collect();
            for start in 0..nv {
                // innermost (rightmost) token applies first
                let mut at = start;
                let mut steps: Vec<(usize, usize, WhiteheadAuto)> = Vec::new();
                let mut ok = true;
                for mv in moves.iter().rev() {
                    let image = mv.apply_tuple(&graph.vertices()[at]);
                    let next = match graph.vertex_index(&image) {
                        Some(i) => i,
                        None => {
                            ok = false;
                            break;
                        }
                    };
                    steps.push((at, next, mv.clone()));
                    at = next;
                }
                if !ok {
                    continue;
                }
                debug_assert_eq!(at, start, "relator word must close");
                two_cells += 1;
                // rewrite the boundary over the non-tree generators
                let mut word = Vec::new();
                for (f, t, mv) in &steps {
                    let (ei, fwd) = directed[&(*f, *t, mv.clone())];
                    if is_tree[ei] {
                        continue;
                    }
                    word.push((gen_of_edge[&ei], !fwd));
                }
                relators.push(StabRelator {
                    base_vertex: start,
                    family: family.tag().to_string(),
                    side_conditions: inst.side_conditions.clone(),
                    word,
                });
            }
        }
    }

    Ok(StabilizerPresentation {
        graph,
        tree_edges,
        generators,
        relators,
        two_cells,
    })
}

impl StabilizerPresentation {
    /// Realize a relator word through the generators' loop automorphisms;
    /// the first symbol of the word is traversed first.
    pub fn realize_relator(&self, rel: &StabRelator) -> Result<Automorphism> {
        let rank = self.graph.rank();
        let mut total = Automorphism::identity(rank);
        for &(g, inverted) in &rel.word {
            let auto = if inverted {
                self.generators[g].realized.invert()?
            } else {
                self.generators[g].realized.clone()
            };
            total = auto.compose(&total)?;
        }
        Ok(total)
    }
}

// ---------------------------------------------------------------------------
// JSON forms
// ---------------------------------------------------------------------------

#[derive(Serialize)]
pub struct LevelGraphJson {
    pub rank: usize,
    pub basepoint: usize,
    pub vertices: Vec<Vec<Vec<i32>>>,
    pub edges: Vec<(usize, usize, String)>,
}

impl LevelGraph {
    pub fn to_json(&self) -> LevelGraphJson {
        LevelGraphJson {
            rank: self.rank,
            basepoint: self.basepoint,
            vertices: self
                .vertices
                .iter()
                .map(|t| t.entries().iter().map(|w| w.to_signed()).collect())
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| (e.from, e.to, e.label.to_string()))
                .collect(),
        }
    }
}

#[derive(Serialize)]
pub struct StabilizerJson {
    pub rank: usize,
    pub vertex_count: usize,
    pub edge_count: usize,
    pub tree_edge_count: usize,
    pub generator_count: usize,
    pub relator_count: usize,
    pub two_cells: usize,
    pub generators: Vec<StabGeneratorJson>,
}

#[derive(Serialize)]
pub struct StabGeneratorJson {
    pub name: String,
    pub edge: (usize, usize, String),
    pub realized: crate::autos::AutomorphismJson,
}

impl StabilizerPresentation {
    pub fn to_json(&self) -> StabilizerJson {
        StabilizerJson {
            rank: self.graph.rank(),
            vertex_count: self.graph.vertices().len(),
            edge_count: self.graph.edges().len(),
            tree_edge_count: self.tree_edges.len(),
            generator_count: self.generators.len(),
            relator_count: self.relators.len(),
            two_cells: self.two_cells,
            generators: self
                .generators
                .iter()
                .map(|g| {
                    let e = &self.graph.edges()[g.edge];
                    StabGeneratorJson {
                        name: g.name.clone(),
                        edge: (e.from, e.to, e.label.to_string()),
                        realized: g.realized.to_json(),
                    }
                })
                .collect(),
        }
    }
}
