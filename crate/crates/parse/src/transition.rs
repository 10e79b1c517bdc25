//! The arc-standard transition system: configurations, the static oracle,
//! greedy decoding, and classifier training.

use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ddp_core::{is_projective, DepDocument, DepEdge, Edu, LabelView, ROOT_LABEL, UNMAPPED_LABEL};

use crate::error::ParseError;
use crate::features::{extract_config_features, FeatureVector};
use crate::graph::EpochStats;
use crate::linear::LinearClassifier;
use crate::projectivize::projectivize;

/// An arc-standard action. `None` labels belong to the unlabeled first
/// stage of two-stage parsing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Action {
    Shift,
    LeftArc(Option<String>),
    RightArc(Option<String>),
}

impl Action {
    pub fn class_name(&self) -> String {
        match self {
            Action::Shift => "SHIFT".into(),
            Action::LeftArc(None) => "LEFT_ARC".into(),
            Action::LeftArc(Some(l)) => format!("LEFT_ARC:{l}"),
            Action::RightArc(None) => "RIGHT_ARC".into(),
            Action::RightArc(Some(l)) => format!("RIGHT_ARC:{l}"),
        }
    }

    pub fn from_class(name: &str) -> Option<Action> {
        match name {
            "SHIFT" => Some(Action::Shift),
            "LEFT_ARC" => Some(Action::LeftArc(None)),
            "RIGHT_ARC" => Some(Action::RightArc(None)),
            _ => {
                if let Some(label) = name.strip_prefix("LEFT_ARC:") {
                    Some(Action::LeftArc(Some(label.to_string())))
                } else {
                    name.strip_prefix("RIGHT_ARC:")
                        .map(|label| Action::RightArc(Some(label.to_string())))
                }
            }
        }
    }

    /// Canonical ordering: SHIFT, then LEFT_ARC by label, then RIGHT_ARC
    /// by label. Ties in decoding resolve in this order.
    fn rank(&self) -> (u8, &str) {
        match self {
            Action::Shift => (0, ""),
            Action::LeftArc(l) => (1, l.as_deref().unwrap_or("")),
            Action::RightArc(l) => (2, l.as_deref().unwrap_or("")),
        }
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.class_name())
    }
}

pub fn sort_action_classes(classes: &mut Vec<String>) {
    classes.sort_by(|a, b| {
        let (aa, bb) = (Action::from_class(a), Action::from_class(b));
        match (aa, bb) {
            (Some(x), Some(y)) => x.rank().0.cmp(&y.rank().0).then_with(|| a.cmp(b)),
            _ => a.cmp(b),
        }
    });
    classes.dedup();
}

/// A parser state: stack (bottom first, root node 0 at the bottom), the
/// buffer as a contiguous suffix of EDUs, and the arcs built so far.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionConfig {
    stack: Vec<usize>,
    next: usize,
    n: usize,
    arcs: Vec<Option<(usize, Option<String>)>>,
    child_counts: Vec<usize>,
}

impl TransitionConfig {
    pub fn new(n: usize) -> Self {
        TransitionConfig {
            stack: vec![0],
            next: 1,
            n,
            arcs: vec![None; n + 1],
            child_counts: vec![0; n + 1],
        }
    }

    pub fn stack(&self) -> &[usize] {
        &self.stack
    }

    pub fn buffer_front(&self) -> Option<usize> {
        (self.next <= self.n).then_some(self.next)
    }

    pub fn buffer_len(&self) -> usize {
        self.n + 1 - self.next
    }

    pub fn is_terminal(&self) -> bool {
        self.next > self.n && self.stack == [0]
    }

    /// Head and label assigned to `dependent`, if any.
    pub fn arc(&self, dependent: usize) -> Option<&(usize, Option<String>)> {
        self.arcs[dependent].as_ref()
    }

    /// Dependents attached to `node` so far.
    pub fn child_count(&self, node: usize) -> usize {
        self.child_counts[node]
    }

    pub fn is_legal(&self, action: &Action) -> bool {
        match action {
            Action::Shift => self.next <= self.n,
            Action::LeftArc(_) => {
                self.stack.len() >= 2 && self.stack[self.stack.len() - 2] != 0
            }
            Action::RightArc(_) => self.stack.len() >= 2,
        }
    }

    /// Applies one action, returning the successor configuration.
    pub fn apply(&self, action: &Action) -> Result<TransitionConfig, ParseError> {
        if !self.is_legal(action) {
            return Err(ParseError::IllegalAction {
                action: action.class_name(),
            });
        }
        let mut next = self.clone();
        match action {
            Action::Shift => {
                next.stack.push(next.next);
                next.next += 1;
            }
            Action::LeftArc(label) => {
                let top = next.stack.pop().unwrap();
                let second = next.stack.pop().unwrap();
                next.arcs[second] = Some((top, label.clone()));
                next.child_counts[top] += 1;
                next.stack.push(top);
            }
            Action::RightArc(label) => {
                let top = next.stack.pop().unwrap();
                let second = *next.stack.last().unwrap();
                next.arcs[top] = Some((second, label.clone()));
                next.child_counts[second] += 1;
            }
        }
        Ok(next)
    }
}

/// Applies `action` to `cfg` under arc-standard semantics.
pub fn apply_action(
    cfg: &TransitionConfig,
    action: &Action,
) -> Result<TransitionConfig, ParseError> {
    cfg.apply(action)
}

pub(crate) fn oracle_actions_with(
    doc: &DepDocument,
    view: LabelView,
) -> Result<Vec<Action>, ParseError> {
    if !is_projective(doc)? {
        return Err(ParseError::NonProjective {
            doc_id: doc.doc_id.clone(),
        });
    }
    let n = doc.n_edus();
    let gold = doc.heads();
    let mut pending = vec![0usize; n + 1];
    for &h in &gold {
        pending[h] += 1;
    }
    let label_for = |d: usize| -> Option<String> {
        Some(if gold[d - 1] == 0 {
            ROOT_LABEL.to_string()
        } else {
            doc.label_of(d, view).to_string()
        })
    };

    let mut cfg = TransitionConfig::new(n);
    let mut actions = Vec::with_capacity(2 * n);
    while !cfg.is_terminal() {
        let stack = cfg.stack();
        let action = if stack.len() >= 2 {
            let s1 = stack[stack.len() - 1];
            let s2 = stack[stack.len() - 2];
            if s2 != 0 && gold[s2 - 1] == s1 && pending[s2] == 0 {
                Action::LeftArc(label_for(s2))
            } else if gold[s1 - 1] == s2 && pending[s1] == 0 {
                Action::RightArc(label_for(s1))
            } else if cfg.buffer_front().is_some() {
                Action::Shift
            } else {
                return Err(ParseError::NonProjective {
                    doc_id: doc.doc_id.clone(),
                });
            }
        } else {
            Action::Shift
        };
        match &action {
            Action::LeftArc(_) => {
                let s2 = stack[stack.len() - 2];
                pending[gold[s2 - 1]] -= 1;
            }
            Action::RightArc(_) => {
                let s1 = stack[stack.len() - 1];
                pending[gold[s1 - 1]] -= 1;
            }
            Action::Shift => {}
        }
        cfg = cfg.apply(&action)?;
        actions.push(action);
    }
    Ok(actions)
}

/// The static oracle: the unique action sequence that reproduces a
/// projective gold tree bottom-up, attaching each node only after it has
/// collected all of its own dependents.
pub fn oracle_actions(doc: &DepDocument) -> Result<Vec<Action>, ParseError> {
    oracle_actions_with(doc, LabelView::Original)
}

/// Candidate actions at decode time: model classes, or the bare action
/// set when the model has no inventory.
fn candidate_actions(model: &LinearClassifier, labeled: bool) -> Vec<(Option<usize>, Action)> {
    if model.n_classes() > 0 {
        model
            .classes()
            .iter()
            .enumerate()
            .filter_map(|(i, c)| Action::from_class(c).map(|a| (Some(i), a)))
            .collect()
    } else {
        let label = |l: &str| if labeled { Some(l.to_string()) } else { None };
        vec![
            (None, Action::Shift),
            (None, Action::LeftArc(label("joint"))),
            (None, Action::RightArc(label("joint"))),
        ]
    }
}

/// Greedy decoding; illegal top-scoring actions are masked out. The root
/// attachment is the forced final RIGHT_ARC, which keeps the output
/// single-rooted, and decoding always takes exactly 2n actions.
pub fn parse_transition(
    doc: &DepDocument,
    model: &LinearClassifier,
    labeled: bool,
) -> DepDocument {
    let n = doc.n_edus();
    let candidates = candidate_actions(model, labeled);
    let mut cfg = TransitionConfig::new(n);
    let mut steps = 0usize;
    while !cfg.is_terminal() {
        steps += 1;
        debug_assert!(steps <= 2 * n, "decoder exceeded 2n steps");
        let stack = cfg.stack();
        let s2 = stack.len().checked_sub(2).map(|i| stack[i]);

        // Root attachment only as the very last reduction.
        if s2 == Some(0) && cfg.buffer_front().is_none() && stack.len() == 2 {
            let label = labeled.then(|| ROOT_LABEL.to_string());
            cfg = cfg.apply(&Action::RightArc(label)).expect("forced root arc");
            continue;
        }

        let features = extract_config_features(doc, &cfg);
        let mut best: Option<(f64, &Action)> = None;
        for (class_idx, action) in &candidates {
            if !cfg.is_legal(action) {
                continue;
            }
            // Arcs onto the root node and early `root` labels are masked.
            match action {
                Action::RightArc(label) => {
                    if s2 == Some(0) || label.as_deref() == Some(ROOT_LABEL) {
                        continue;
                    }
                }
                Action::LeftArc(label) => {
                    if label.as_deref() == Some(ROOT_LABEL) {
                        continue;
                    }
                }
                Action::Shift => {}
            }
            let score = class_idx.map_or(0.0, |i| model.score(i, &features, true));
            if best.map_or(true, |(s, _)| score > s) {
                best = Some((score, action));
            }
        }
        let action = best.map(|(_, a)| a.clone()).unwrap_or(Action::Shift);
        cfg = cfg.apply(&action).expect("masked actions are legal");
    }

    let edges: Vec<DepEdge> = (1..=n)
        .map(|d| {
            let (head, label) = cfg.arc(d).cloned().expect("terminal config attaches all");
            let label = label.unwrap_or_else(|| {
                if head == 0 {
                    ROOT_LABEL.to_string()
                } else {
                    UNMAPPED_LABEL.to_string()
                }
            });
            DepEdge::new(head, d, label)
        })
        .collect();
    let edus: Vec<Edu> = doc.edus().to_vec();
    DepDocument::new(doc.doc_id.clone(), edus, edges).expect("decoder emits one head per EDU")
}

/// How to use non-projective gold trees during training.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NonProjectivePolicy {
    /// Projectivize by lifting (default).
    Lift,
    /// Drop the document.
    Skip,
}

#[derive(Debug, Clone)]
pub struct TransitionTrainOptions {
    pub rounds: usize,
    pub seed: u64,
    pub shuffle: bool,
    pub margin: f64,
    pub view: LabelView,
    pub nonprojective: NonProjectivePolicy,
}

impl Default for TransitionTrainOptions {
    fn default() -> Self {
        TransitionTrainOptions {
            rounds: 10,
            seed: 0,
            shuffle: true,
            margin: 1.0,
            view: LabelView::Original,
            nonprojective: NonProjectivePolicy::Lift,
        }
    }
}

/// Trains the action classifier on oracle configurations. `labeled` picks
/// the vanilla labeled action set or the bare one of two-stage parsing.
pub fn train_transition_parser(
    corpus: &[DepDocument],
    labeled: bool,
    opts: &TransitionTrainOptions,
    mut on_epoch: Option<&mut dyn FnMut(EpochStats, &LinearClassifier)>,
) -> Result<LinearClassifier, ParseError> {
    let mut instances: Vec<(FeatureVector, String)> = Vec::new();
    for doc in corpus {
        let doc = match is_projective(doc)? {
            true => doc.clone(),
            false => match opts.nonprojective {
                NonProjectivePolicy::Lift => projectivize(doc)?,
                NonProjectivePolicy::Skip => continue,
            },
        };
        let actions = oracle_actions_with(&doc, opts.view)?;
        let mut cfg = TransitionConfig::new(doc.n_edus());
        for mut action in actions {
            let features = extract_config_features(&doc, &cfg);
            cfg = cfg.apply(&action)?;
            if !labeled {
                action = match action {
                    Action::Shift => Action::Shift,
                    Action::LeftArc(_) => Action::LeftArc(None),
                    Action::RightArc(_) => Action::RightArc(None),
                };
            }
            instances.push((features, action.class_name()));
        }
    }
    if instances.is_empty() {
        return Err(ParseError::EmptyCorpus);
    }

    let mut classes: Vec<String> = instances.iter().map(|(_, c)| c.clone()).collect();
    classes.sort();
    classes.dedup();
    sort_action_classes(&mut classes);
    let class_index: std::collections::BTreeMap<&str, usize> = classes
        .iter()
        .enumerate()
        .map(|(i, c)| (c.as_str(), i))
        .collect();
    let gold_indices: Vec<usize> = instances
        .iter()
        .map(|(_, c)| class_index[c.as_str()])
        .collect();

    let mut model = LinearClassifier::new(classes);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut order: Vec<usize> = (0..instances.len()).collect();
    for epoch in 1..=opts.rounds {
        if opts.shuffle {
            order.shuffle(&mut rng);
        }
        let mut correct = 0usize;
        for &i in &order {
            if model.learn(&instances[i].0, gold_indices[i], opts.margin) {
                correct += 1;
            }
        }
        model.finalize();
        if let Some(cb) = on_epoch.as_mut() {
            cb(
                EpochStats {
                    epoch,
                    train_metric: correct as f64 / instances.len() as f64,
                },
                &model,
            );
        }
    }
    model.finalize();
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(heads: &[usize]) -> DepDocument {
        let n = heads.len();
        let edus = (1..=n).map(|i| Edu::new(i, format!("第{i}句"))).collect();
        let labels: Vec<&str> = heads
            .iter()
            .map(|&h| if h == 0 { "root" } else { "joint" })
            .collect();
        DepDocument::from_heads("d", edus, heads, &labels).unwrap()
    }

    fn replay(n: usize, actions: &[Action]) -> TransitionConfig {
        let mut cfg = TransitionConfig::new(n);
        for a in actions {
            assert!(cfg.is_legal(a), "illegal oracle action {a}");
            cfg = cfg.apply(a).unwrap();
        }
        cfg
    }

    #[test]
    fn oracle_reproduces_a_chain_in_2n_steps() {
        let d = doc(&[0, 1]);
        let actions = oracle_actions(&d).unwrap();
        assert_eq!(actions.len(), 4);
        let cfg = replay(2, &actions);
        assert!(cfg.is_terminal());
        assert_eq!(cfg.arc(1), Some(&(0, Some("root".to_string()))));
        assert_eq!(cfg.arc(2), Some(&(1, Some("joint".to_string()))));
    }

    #[test]
    fn single_edu_oracle() {
        let actions = oracle_actions(&doc(&[0])).unwrap();
        assert_eq!(
            actions,
            vec![Action::Shift, Action::RightArc(Some("root".into()))]
        );
    }

    #[test]
    fn non_projective_gold_is_rejected() {
        let err = oracle_actions(&doc(&[3, 3, 0, 1])).unwrap_err();
        assert!(matches!(err, ParseError::NonProjective { .. }));
    }

    #[test]
    fn shift_on_empty_buffer_is_illegal() {
        let cfg = replay(1, &[Action::Shift]);
        assert!(matches!(
            cfg.apply(&Action::Shift),
            Err(ParseError::IllegalAction { .. })
        ));
    }

    #[test]
    fn left_arc_pops_the_second_top() {
        let cfg = replay(2, &[Action::Shift, Action::Shift]);
        assert_eq!(cfg.stack(), &[0, 1, 2]);
        let cfg = cfg.apply(&Action::LeftArc(Some("joint".into()))).unwrap();
        assert_eq!(cfg.stack(), &[0, 2]);
        assert_eq!(cfg.arc(1), Some(&(2, Some("joint".to_string()))));
    }

    #[test]
    fn left_arc_never_targets_the_root_node() {
        let cfg = replay(1, &[Action::Shift]);
        assert_eq!(cfg.stack(), &[0, 1]);
        assert!(!cfg.is_legal(&Action::LeftArc(None)));
    }

    #[test]
    fn right_arc_on_root_reaches_the_terminal_state() {
        let cfg = replay(1, &[Action::Shift]);
        let cfg = cfg.apply(&Action::RightArc(Some("root".into()))).unwrap();
        assert!(cfg.is_terminal());
    }

    #[test]
    fn zero_model_parses_every_doc_into_a_valid_tree() {
        for heads in [vec![0], vec![0, 1], vec![0, 1, 1, 3, 1]] {
            let d = doc(&heads);
            let model = LinearClassifier::new(Vec::new());
            let parsed = parse_transition(&d, &model, false);
            assert!(ddp_core::validate_tree(&parsed).is_valid());
            assert_eq!(parsed.n_edus(), d.n_edus());
        }
    }

    #[test]
    fn class_ordering_prefers_shift() {
        let mut classes = vec![
            "RIGHT_ARC:a".to_string(),
            "LEFT_ARC:b".to_string(),
            "SHIFT".to_string(),
            "LEFT_ARC:a".to_string(),
        ];
        sort_action_classes(&mut classes);
        assert_eq!(classes, vec!["SHIFT", "LEFT_ARC:a", "LEFT_ARC:b", "RIGHT_ARC:a"]);
    }
}
