//! Sparse feature vectors and the fixed feature templates for arc scoring,
//! transition classification, and relation labeling.
//!
//! Feature extraction is deterministic and stringly keyed; weight tables
//! are ordered maps so that dot products sum in a fixed order and training
//! is bit-reproducible.

use std::collections::BTreeMap;

use ddp_core::{DepDocument, TreeFeatures};

use crate::transition::TransitionConfig;

/// A sparse count vector. Zero-valued entries are never stored.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FeatureVector {
    values: BTreeMap<String, f64>,
}

impl FeatureVector {
    pub fn new() -> Self {
        FeatureVector::default()
    }

    /// Adds a binary feature occurrence (count += 1).
    pub fn add(&mut self, name: impl Into<String>) {
        *self.values.entry(name.into()).or_insert(0.0) += 1.0;
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, name: &str) -> f64 {
        self.values.get(name).copied().unwrap_or(0.0)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.values.contains_key(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.values.iter().map(|(k, &v)| (k.as_str(), v))
    }

    pub fn dot(&self, weights: &BTreeMap<String, f64>) -> f64 {
        self.values
            .iter()
            .map(|(k, v)| weights.get(k).copied().unwrap_or(0.0) * v)
            .sum()
    }
}

fn first_char(text: &str) -> String {
    text.chars().next().map(String::from).unwrap_or_else(|| "_".into())
}

fn last_char(text: &str) -> String {
    text.chars().last().map(String::from).unwrap_or_else(|| "_".into())
}

fn len_bucket(chars: usize) -> String {
    match chars {
        0..=5 => chars.to_string(),
        6..=10 => "6-10".into(),
        11..=20 => "11-20".into(),
        _ => ">20".into(),
    }
}

fn dist_bucket(delta: isize) -> String {
    let sign = if delta < 0 { "-" } else { "" };
    match delta.unsigned_abs() {
        d @ 0..=4 => format!("{sign}{d}"),
        5..=10 => format!("{sign}5+"),
        _ => format!("{sign}10+"),
    }
}

fn pos_bucket(index: usize, n: usize) -> String {
    if index == 1 {
        "first".into()
    } else if index == n {
        "last".into()
    } else {
        format!("q{}", (index - 1) * 4 / n + 1)
    }
}

fn count_bucket(count: usize) -> String {
    if count >= 3 {
        "3+".into()
    } else {
        count.to_string()
    }
}

/// Features of a candidate arc `head -> dependent` (`head` 0 is the root).
pub fn extract_arc_features(doc: &DepDocument, head: usize, dependent: usize) -> FeatureVector {
    let n = doc.n_edus();
    let mut fv = FeatureVector::new();
    let d_edu = doc.edu(dependent);
    let df = first_char(&d_edu.text);
    let dl = last_char(&d_edu.text);
    let dlen = len_bucket(d_edu.char_len);
    let dpos = pos_bucket(dependent, n);

    fv.add(format!("d.first={df}"));
    fv.add(format!("d.last={dl}"));
    fv.add(format!("d.len={dlen}"));
    fv.add(format!("d.pos={dpos}"));

    if head == 0 {
        fv.add("head=ROOT");
        fv.add(format!("head=ROOT&d.first={df}"));
        fv.add(format!("head=ROOT&d.pos={dpos}"));
        return fv;
    }

    let h_edu = doc.edu(head);
    let hf = first_char(&h_edu.text);
    let hl = last_char(&h_edu.text);
    let hlen = len_bucket(h_edu.char_len);
    let hpos = pos_bucket(head, n);
    let dir = if dependent > head { "right" } else { "left" };
    let dist = dist_bucket(dependent as isize - head as isize);

    fv.add(format!("h.first={hf}"));
    fv.add(format!("h.last={hl}"));
    fv.add(format!("h.len={hlen}"));
    fv.add(format!("h.pos={hpos}"));
    fv.add(format!("dir={dir}"));
    fv.add(format!("dist={dist}"));
    fv.add(format!("hf&df={hf}&{df}"));
    fv.add(format!("hl&dl={hl}&{dl}"));
    fv.add(format!("dir&dist={dir}&{dist}"));
    fv.add(format!("hf&df&dir={hf}&{df}&{dir}"));
    fv.add(format!("hlen&dlen={hlen}&{dlen}"));
    fv.add(format!("df&dist={df}&{dist}"));
    fv
}

/// Features of a transition configuration: boundary characters, lengths
/// and positions of the top-2 stack EDUs and the buffer front, their
/// distance, and partial-arc counts.
pub fn extract_config_features(doc: &DepDocument, cfg: &TransitionConfig) -> FeatureVector {
    let n = doc.n_edus();
    let mut fv = FeatureVector::new();
    let stack = cfg.stack();

    let describe = |fv: &mut FeatureVector, tag: &str, node: usize| -> String {
        if node == 0 {
            fv.add(format!("{tag}=ROOT"));
            "ROOT".into()
        } else {
            let edu = doc.edu(node);
            let first = first_char(&edu.text);
            fv.add(format!("{tag}.first={first}"));
            fv.add(format!("{tag}.last={}", last_char(&edu.text)));
            fv.add(format!("{tag}.len={}", len_bucket(edu.char_len)));
            fv.add(format!("{tag}.pos={}", pos_bucket(node, n)));
            first
        }
    };

    let s1 = stack.last().copied();
    let s2 = stack.len().checked_sub(2).map(|i| stack[i]);
    let b1 = cfg.buffer_front();

    let s1f = match s1 {
        Some(x) => {
            let f = describe(&mut fv, "s1", x);
            fv.add(format!("s1.nch={}", count_bucket(cfg.child_count(x))));
            f
        }
        None => {
            fv.add("s1=NONE");
            "NONE".into()
        }
    };
    let s2f = match s2 {
        Some(x) => {
            let f = describe(&mut fv, "s2", x);
            if x != 0 {
                fv.add(format!("s2.nch={}", count_bucket(cfg.child_count(x))));
            }
            f
        }
        None => {
            fv.add("s2=NONE");
            "NONE".into()
        }
    };
    let b1f = match b1 {
        Some(x) => describe(&mut fv, "b1", x),
        None => {
            fv.add("buf=EMPTY");
            "NONE".into()
        }
    };

    if let (Some(a), Some(b)) = (s2, s1) {
        if a != 0 {
            fv.add(format!("s2s1.dist={}", dist_bucket(b as isize - a as isize)));
        }
    }
    fv.add(format!("s1f&s2f={s1f}&{s2f}"));
    fv.add(format!("s1f&b1f={s1f}&{b1f}"));
    fv.add(format!("s2f&b1f={s2f}&{b1f}"));
    fv.add(format!(
        "nch2={}&{}",
        s1.map_or("-".into(), |x| count_bucket(cfg.child_count(x))),
        s2.map_or("-".into(), |x| if x == 0 {
            "ROOT".into()
        } else {
            count_bucket(cfg.child_count(x))
        })
    ));
    fv
}

/// Features for relation labeling of an already attached edge: the arc
/// features plus the dependent's position in the finished tree.
pub fn extract_label_features(
    doc: &DepDocument,
    dependent: usize,
    tf: &TreeFeatures,
) -> FeatureVector {
    let head = doc.head_of(dependent);
    let mut fv = extract_arc_features(doc, head, dependent);
    let depth = if tf.depth >= 5 {
        "5+".to_string()
    } else {
        tf.depth.to_string()
    };
    let dir = if dependent > head { "right" } else { "left" };
    fv.add(format!("tf.depth={depth}"));
    fv.add(format!("tf.sibs={}", count_bucket(tf.sibling_count)));
    fv.add(format!("tf.children={}", count_bucket(tf.child_count)));
    fv.add(format!("tf.hdist={}", dist_bucket(tf.head_distance)));
    fv.add(format!("tf.depth&dir={depth}&{dir}"));
    fv.add(format!("tf.depth&sibs={depth}&{}", count_bucket(tf.sibling_count)));
    fv
}

#[cfg(test)]
mod tests {
    use super::*;
    use ddp_core::Edu;

    fn doc(n: usize) -> DepDocument {
        let edus = (1..=n).map(|i| Edu::new(i, format!("第{i}句"))).collect();
        let heads: Vec<usize> = (0..n).collect();
        let labels: Vec<&str> = (0..n).map(|i| if i == 0 { "root" } else { "joint" }).collect();
        DepDocument::from_heads("d", edus, &heads, &labels).unwrap()
    }

    #[test]
    fn root_arcs_carry_the_root_flag_and_no_direction() {
        let fv = extract_arc_features(&doc(3), 0, 2);
        assert!(fv.contains("head=ROOT"));
        assert!(!fv.contains("dir=right"));
    }

    #[test]
    fn adjacent_right_arc_has_direction_and_distance() {
        let fv = extract_arc_features(&doc(3), 1, 2);
        assert!(fv.contains("dir=right"));
        assert!(fv.contains("dist=1"));
    }

    #[test]
    fn extraction_is_deterministic() {
        let d = doc(4);
        assert_eq!(
            extract_arc_features(&d, 2, 4),
            extract_arc_features(&d, 2, 4)
        );
    }

    #[test]
    fn distance_buckets_saturate() {
        assert_eq!(dist_bucket(3), "3");
        assert_eq!(dist_bucket(-3), "-3");
        assert_eq!(dist_bucket(7), "5+");
        assert_eq!(dist_bucket(-15), "-10+");
    }

    #[test]
    fn dot_ignores_missing_features() {
        let mut fv = FeatureVector::new();
        fv.add("a");
        fv.add("a");
        fv.add("b");
        let mut w = BTreeMap::new();
        w.insert("a".to_string(), 1.5);
        w.insert("c".to_string(), 100.0);
        assert_eq!(fv.dot(&w), 3.0);
    }
}
