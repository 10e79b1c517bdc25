//! First-order projective decoding with the split-span dynamic program.

use crate::graph::ScoreMatrix;

const NEG: f64 = f64::NEG_INFINITY;

struct Chart {
    n: usize,
    // Scores and split backpointers per (i, j) cell.
    cr: Vec<f64>, // complete, head at i, span i..j
    cl: Vec<f64>, // complete, head at j
    ir: Vec<f64>, // incomplete, arc i -> j
    il: Vec<f64>, // incomplete, arc j -> i
    bp_cr: Vec<usize>,
    bp_cl: Vec<usize>,
    bp_ir: Vec<usize>,
    bp_il: Vec<usize>,
}

impl Chart {
    fn new(n: usize) -> Self {
        let cells = (n + 1) * (n + 1);
        let mut chart = Chart {
            n,
            cr: vec![NEG; cells],
            cl: vec![NEG; cells],
            ir: vec![NEG; cells],
            il: vec![NEG; cells],
            bp_cr: vec![0; cells],
            bp_cl: vec![0; cells],
            bp_ir: vec![0; cells],
            bp_il: vec![0; cells],
        };
        for i in 0..=n {
            let at = chart.at(i, i);
            chart.cr[at] = 0.0;
            chart.cl[at] = 0.0;
        }
        chart
    }

    fn at(&self, i: usize, j: usize) -> usize {
        i * (self.n + 1) + j
    }

    /// Fills all spans within `lo..=n`. Arcs into position 0 are never
    /// scored, so cells that would need them stay at negative infinity.
    fn fill(&mut self, scores: &ScoreMatrix, lo: usize) {
        let n = self.n;
        let arc = |h: usize, d: usize| if d == 0 { NEG } else { scores.get(h, d) };
        for width in 1..=n.saturating_sub(lo) {
            for i in lo..=n - width {
                let j = i + width;
                let cell = self.at(i, j);

                for k in i..j {
                    let inner = self.cr[self.at(i, k)] + self.cl[self.at(k + 1, j)];
                    let right = inner + arc(i, j);
                    if right > self.ir[cell] {
                        self.ir[cell] = right;
                        self.bp_ir[cell] = k;
                    }
                    let left = inner + arc(j, i);
                    if left > self.il[cell] {
                        self.il[cell] = left;
                        self.bp_il[cell] = k;
                    }
                }
                for k in i + 1..=j {
                    let cand = self.ir[self.at(i, k)] + self.cr[self.at(k, j)];
                    if cand > self.cr[cell] {
                        self.cr[cell] = cand;
                        self.bp_cr[cell] = k;
                    }
                }
                for k in i..j {
                    let cand = self.cl[self.at(i, k)] + self.il[self.at(k, j)];
                    if cand > self.cl[cell] {
                        self.cl[cell] = cand;
                        self.bp_cl[cell] = k;
                    }
                }
            }
        }
    }

    fn trace_cr(&self, i: usize, j: usize, heads: &mut [usize]) {
        if i == j {
            return;
        }
        let k = self.bp_cr[self.at(i, j)];
        self.trace_ir(i, k, heads);
        self.trace_cr(k, j, heads);
    }

    fn trace_cl(&self, i: usize, j: usize, heads: &mut [usize]) {
        if i == j {
            return;
        }
        let k = self.bp_cl[self.at(i, j)];
        self.trace_cl(i, k, heads);
        self.trace_il(k, j, heads);
    }

    fn trace_ir(&self, i: usize, j: usize, heads: &mut [usize]) {
        heads[j - 1] = i;
        let k = self.bp_ir[self.at(i, j)];
        self.trace_cr(i, k, heads);
        self.trace_cl(k + 1, j, heads);
    }

    fn trace_il(&self, i: usize, j: usize, heads: &mut [usize]) {
        heads[i - 1] = j;
        let k = self.bp_il[self.at(i, j)];
        self.trace_cr(i, k, heads);
        self.trace_cl(k + 1, j, heads);
    }
}

/// The maximum-score projective tree rooted at position 0, as a head
/// sequence for EDUs 1..=n. With `single_root` exactly one EDU attaches to
/// the root: the chart covers 1..=n and the root arc is chosen on top.
pub fn eisner_decode(scores: &ScoreMatrix, single_root: bool) -> Vec<usize> {
    let n = scores.n();
    if n == 0 {
        return Vec::new();
    }
    let mut heads = vec![0usize; n];
    if single_root {
        let mut chart = Chart::new(n);
        chart.fill(scores, 1);
        let mut best = NEG;
        let mut best_root = 1;
        for r in 1..=n {
            let total =
                scores.get(0, r) + chart.cl[chart.at(1, r)] + chart.cr[chart.at(r, n)];
            if total > best {
                best = total;
                best_root = r;
            }
        }
        chart.trace_cl(1, best_root, &mut heads);
        chart.trace_cr(best_root, n, &mut heads);
        heads[best_root - 1] = 0;
    } else {
        let mut chart = Chart::new(n);
        chart.fill(scores, 0);
        chart.trace_cr(0, n, &mut heads);
    }
    heads
}

/// Total score of a head sequence under a matrix.
pub fn tree_score(scores: &ScoreMatrix, heads: &[usize]) -> f64 {
    heads
        .iter()
        .enumerate()
        .map(|(i, &h)| scores.get(h, i + 1))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matrix(n: usize, entries: &[(usize, usize, f64)]) -> ScoreMatrix {
        let mut m = ScoreMatrix::new(n);
        for &(h, d, s) in entries {
            m.set(h, d, s);
        }
        m
    }

    #[test]
    fn single_node() {
        let m = matrix(1, &[(0, 1, 2.0)]);
        assert_eq!(eisner_decode(&m, true), vec![0]);
        assert_eq!(eisner_decode(&m, false), vec![0]);
    }

    #[test]
    fn two_nodes_prefers_the_chain() {
        let m = matrix(2, &[(0, 1, 5.0), (1, 2, 3.0), (0, 2, 1.0), (2, 1, 0.0)]);
        let heads = eisner_decode(&m, true);
        assert_eq!(heads, vec![0, 1]);
        assert_eq!(tree_score(&m, &heads), 8.0);
    }

    #[test]
    fn single_root_constraint_changes_the_tree() {
        // Two root attachments would win without the constraint.
        let m = matrix(
            2,
            &[(0, 1, 10.0), (0, 2, 10.0), (1, 2, 3.0), (2, 1, 2.0)],
        );
        assert_eq!(eisner_decode(&m, false), vec![0, 0]);
        let single = eisner_decode(&m, true);
        assert_eq!(single, vec![0, 1]);
        assert_eq!(tree_score(&m, &single), 13.0);
    }
}
