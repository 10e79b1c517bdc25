//! Maximum spanning arborescence decoding (Chu-Liu/Edmonds), for trees
//! that may be non-projective.

use std::collections::BTreeMap;

use crate::eisner::tree_score;
use crate::graph::ScoreMatrix;

/// Large negative sentinel for banned arcs. Finite, so the contraction
/// arithmetic never produces NaN.
const BANNED: f64 = -1e18;

/// The maximum-score arborescence rooted at 0 as a head sequence. With
/// `single_root`, exactly one node attaches to the root (exact: decoded by
/// running the search once per candidate root attachment).
pub fn mst_decode(scores: &ScoreMatrix, single_root: bool) -> Vec<usize> {
    let n = scores.n();
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![0];
    }
    if !single_root {
        return run_cle(&to_rows(scores, None));
    }
    let mut best: Option<(f64, Vec<usize>)> = None;
    for forced in 1..=n {
        let heads = run_cle(&to_rows(scores, Some(forced)));
        let total = tree_score(scores, &heads);
        if best.as_ref().map_or(true, |(s, _)| total > *s) {
            best = Some((total, heads));
        }
    }
    best.expect("n >= 1 yields a tree").1
}

/// Dense copy with self-arcs and arcs into the root banned; optionally
/// bans every root arc except `0 -> forced`.
fn to_rows(scores: &ScoreMatrix, forced: Option<usize>) -> Vec<Vec<f64>> {
    let n = scores.n();
    let mut rows = vec![vec![BANNED; n + 1]; n + 1];
    for h in 0..=n {
        for d in 1..=n {
            if h == d {
                continue;
            }
            if h == 0 {
                if let Some(r) = forced {
                    if d != r {
                        continue;
                    }
                }
            }
            rows[h][d] = scores.get(h, d);
        }
    }
    rows
}

fn run_cle(rows: &[Vec<f64>]) -> Vec<usize> {
    let n = rows.len() - 1;
    let mut scores = rows.to_vec();
    let mut active = vec![true; n + 1];
    let parents = cle(&mut scores, &mut active);
    (1..=n)
        .map(|d| parents[d].expect("non-root vertex has a parent"))
        .collect()
}

fn cle(scores: &mut Vec<Vec<f64>>, active: &mut [bool]) -> Vec<Option<usize>> {
    let max_parents = find_max_parents(scores, active);
    let cycle = match find_cycle(&max_parents) {
        Some(cycle) => cycle,
        None => return max_parents,
    };

    let representative = cycle[0];
    let cycle_sum: f64 = cycle
        .iter()
        .map(|&v| scores[max_parents[v].unwrap()][v])
        .sum();
    for &v in &cycle[1..] {
        active[v] = false;
    }

    // Collapse the cycle into its representative, remembering which real
    // endpoint each surviving contracted arc stands for.
    let mut incoming: BTreeMap<usize, usize> = BTreeMap::new();
    let mut outgoing: BTreeMap<usize, usize> = BTreeMap::new();
    let outside: Vec<usize> = (0..scores.len())
        .filter(|&v| active[v] && !cycle.contains(&v))
        .collect();
    for &v in &outside {
        let mut best_in = BANNED * 2.0;
        let mut best_in_vertex = cycle[0];
        let mut best_out = BANNED * 2.0;
        let mut best_out_vertex = cycle[0];
        for &c in &cycle {
            let broken = scores[max_parents[c].unwrap()][c];
            let in_score = cycle_sum + scores[v][c] - broken;
            if in_score > best_in {
                best_in = in_score;
                best_in_vertex = c;
            }
            if scores[c][v] > best_out {
                best_out = scores[c][v];
                best_out_vertex = c;
            }
        }
        scores[v][representative] = best_in;
        scores[representative][v] = best_out;
        incoming.insert(v, best_in_vertex);
        outgoing.insert(v, best_out_vertex);
    }

    let contracted = cle(scores, active);
    expand_cycle(
        contracted,
        &max_parents,
        &cycle,
        representative,
        &incoming,
        &outgoing,
    )
}

fn expand_cycle(
    mut tree: Vec<Option<usize>>,
    max_parents: &[Option<usize>],
    cycle: &[usize],
    representative: usize,
    incoming: &BTreeMap<usize, usize>,
    outgoing: &BTreeMap<usize, usize>,
) -> Vec<Option<usize>> {
    // The chosen incoming edge breaks the cycle at one vertex.
    let outer_parent = tree[representative].expect("contracted vertex has a parent");
    let entry = incoming[&outer_parent];
    for &c in cycle {
        tree[c] = max_parents[c];
    }
    tree[entry] = Some(outer_parent);

    // Arcs that left the contracted vertex really left some cycle member.
    for (&v, &real_source) in outgoing {
        if tree[v] == Some(representative) && v != entry {
            tree[v] = Some(real_source);
        }
    }
    // `entry` keeps its outer parent even if it also pointed at the
    // representative, handled above; other vertices pointing at the
    // representative now point into the cycle correctly.
    tree
}

fn find_max_parents(scores: &[Vec<f64>], active: &[bool]) -> Vec<Option<usize>> {
    let mut parents = vec![None; scores.len()];
    for d in 1..scores.len() {
        if !active[d] {
            continue;
        }
        let mut best = BANNED * 2.0;
        let mut best_parent = None;
        for h in 0..scores.len() {
            if h == d || !active[h] {
                continue;
            }
            if scores[h][d] > best {
                best = scores[h][d];
                best_parent = Some(h);
            }
        }
        parents[d] = best_parent;
    }
    parents
}

fn find_cycle(parents: &[Option<usize>]) -> Option<Vec<usize>> {
    let len = parents.len();
    // 0 = unseen, 1 = on walk, 2 = done
    let mut state = vec![0u8; len];
    state[0] = 2;
    for start in 0..len {
        if state[start] != 0 {
            continue;
        }
        let mut path = Vec::new();
        let mut cur = start;
        loop {
            if state[cur] == 1 {
                let pos = path.iter().position(|&x| x == cur).unwrap();
                return Some(path[pos..].to_vec());
            }
            if state[cur] == 2 {
                break;
            }
            state[cur] = 1;
            path.push(cur);
            match parents[cur] {
                Some(p) => cur = p,
                None => break,
            }
        }
        for v in path {
            state[v] = 2;
        }
    }
    None
}
