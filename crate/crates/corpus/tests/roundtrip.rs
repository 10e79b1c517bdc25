//! Round-trip properties: read(write(x)) == x for random corpora, and
//! byte-identical re-serialization of canonical files.

use proptest::prelude::*;

use ddp_core::{Confidence, DepDocument, DepEdge, Edu, Provenance};
use ddp_corpus::{
    dep_corpus_to_string, read_dep_corpus, read_pdtb_records, read_relation_mapping,
    read_rst_trees, rst_trees_to_string, write_pdtb_records, write_relation_mapping, Nuclearity,
    PdtbKind, PdtbRelationRecord, RelationMapping, RstNode, RstTree,
};

fn label_strategy() -> impl Strategy<Value = String> {
    prop::sample::select(vec![
        "joint",
        "explanation",
        "causality",
        "continuation",
        "goal",
        "progressive",
        "temporal",
        "example illustration",
    ])
    .prop_map(str::to_string)
}

fn text_strategy() -> impl Strategy<Value = String> {
    proptest::string::string_regex("[a-z自然语言分析]{1,8}").unwrap()
}

fn doc_strategy() -> impl Strategy<Value = DepDocument> {
    (1usize..9)
        .prop_flat_map(|n| {
            (
                proptest::collection::vec(text_strategy(), n),
                proptest::collection::vec(label_strategy(), n),
                proptest::collection::vec(any::<u32>(), n),
                proptest::collection::vec(any::<bool>(), n),
                "[a-z0-9]{1,6}",
            )
        })
        .prop_map(|(texts, labels, head_picks, mapped, doc_id)| {
            let n = texts.len();
            let edus: Vec<Edu> = texts
                .iter()
                .enumerate()
                .map(|(i, t)| Edu::new(i + 1, t.clone()))
                .collect();
            let edges: Vec<DepEdge> = (1..=n)
                .map(|d| {
                    // Any head below the dependent keeps the doc a valid tree.
                    let head = head_picks[d - 1] as usize % d;
                    let label = if head == 0 { "root" } else { &labels[d - 1] };
                    let mut e = DepEdge::new(head, d, label).with_provenance(
                        if mapped[d - 1] {
                            Provenance::Annotated
                        } else {
                            Provenance::Complemented
                        },
                        if d % 2 == 0 {
                            Confidence::High
                        } else {
                            Confidence::Review
                        },
                    );
                    if mapped[d - 1] {
                        e = e.with_unified(if head == 0 { "root" } else { "joint" });
                    }
                    e
                })
                .collect();
            DepDocument::new(doc_id, edus, edges).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(160))]

    #[test]
    fn ddep_round_trip(docs in proptest::collection::vec(doc_strategy(), 0..6)) {
        let text = dep_corpus_to_string(&docs).unwrap();
        let back = read_dep_corpus(text.as_bytes()).unwrap();
        prop_assert_eq!(&back, &docs);
        // Canonical bytes are a fixed point.
        prop_assert_eq!(dep_corpus_to_string(&back).unwrap(), text);
    }
}

fn rst_node_strategy() -> impl Strategy<Value = RstNode> {
    // Shapes only; leaf indices are renumbered afterwards.
    let leaf = text_strategy().prop_map(|t| RstNode::leaf(1, t));
    leaf.prop_recursive(3, 24, 4, |inner| {
        (
            label_strategy(),
            proptest::collection::vec((any::<bool>(), inner), 2..4),
        )
            .prop_map(|(label, kids)| {
                let mut children: Vec<(Nuclearity, RstNode)> = kids
                    .into_iter()
                    .map(|(n, c)| {
                        (
                            if n {
                                Nuclearity::Nucleus
                            } else {
                                Nuclearity::Satellite
                            },
                            c,
                        )
                    })
                    .collect();
                if !children.iter().any(|(n, _)| *n == Nuclearity::Nucleus) {
                    children[0].0 = Nuclearity::Nucleus;
                }
                RstNode::internal(label, children)
            })
    })
}

fn renumber(node: &mut RstNode, next: &mut usize) {
    match node {
        RstNode::Leaf { index, .. } => {
            *index = *next;
            *next += 1;
        }
        RstNode::Internal { children, .. } => {
            for (_, child) in children {
                renumber(child, next);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(160))]

    #[test]
    fn rsx_round_trip(shapes in proptest::collection::vec(rst_node_strategy(), 1..4)) {
        let trees: Vec<RstTree> = shapes
            .into_iter()
            .enumerate()
            .map(|(i, mut root)| {
                let mut next = 1;
                renumber(&mut root, &mut next);
                RstTree::new(format!("doc{i}"), root)
            })
            .collect();
        let text = rst_trees_to_string(&trees).unwrap();
        let back = read_rst_trees(text.as_bytes()).unwrap();
        prop_assert_eq!(&back, &trees);
        prop_assert_eq!(rst_trees_to_string(&back).unwrap(), text);
    }

    #[test]
    fn pdr_round_trip(
        specs in proptest::collection::vec(
            (1usize..9, 1usize..9, label_strategy(), text_strategy(), any::<bool>()),
            0..8,
        )
    ) {
        let records: Vec<PdtbRelationRecord> = specs
            .into_iter()
            .enumerate()
            .map(|(i, (a, b, label, conn, explicit))| {
                // Disjoint by construction: arg1 below 10, arg2 above.
                PdtbRelationRecord::new(
                    format!("d{i}"),
                    if explicit { PdtbKind::Explicit } else { PdtbKind::Implicit },
                    conn,
                    label,
                    1..=a,
                    10..10 + b,
                )
            })
            .collect();
        let mut buf = Vec::new();
        write_pdtb_records(&records, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let back = read_pdtb_records(text.as_bytes()).unwrap();
        prop_assert_eq!(back, records);
    }

    #[test]
    fn map_round_trip(
        pairs in proptest::collection::btree_map("[a-z]{1,6}", label_strategy(), 0..12)
    ) {
        let mut mapping = RelationMapping::new();
        for (original, unified) in &pairs {
            mapping
                .insert(ddp_core::SchemeId::Su, original.clone(), unified.clone())
                .unwrap();
        }
        let mut buf = Vec::new();
        write_relation_mapping(&mapping, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let back = read_relation_mapping(text.as_bytes()).unwrap();
        prop_assert_eq!(back, mapping);
    }
}
