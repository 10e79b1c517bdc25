//! EDU subdivision: applying `.spl` records that split coarse EDUs into
//! finer ones and graft the manually labeled intra-EDU edges.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use ddp_core::{Confidence, DepDocument, DepEdge, Edu, Provenance};
use ddp_corpus::FormatError;

use crate::error::ConvertError;

/// One EDU subdivided into parts, with a tree over the parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EduSplitRecord {
    pub doc_id: String,
    pub original_index: usize,
    pub parts: Vec<String>,
    /// `(head_part, dependent_part, label)` over 1-based part numbers.
    pub intra_edges: Vec<(usize, usize, String)>,
}

impl EduSplitRecord {
    fn bad(&self, msg: impl Into<String>) -> ConvertError {
        ConvertError::BadSplit {
            doc_id: self.doc_id.clone(),
            original_index: self.original_index,
            msg: msg.into(),
        }
    }

    /// The part inheriting the original EDU's attachment: the unique part
    /// that is never a dependent in `intra_edges`.
    fn root_part(&self) -> Result<usize, ConvertError> {
        let m = self.parts.len();
        if m < 2 {
            return Err(self.bad("a split needs at least 2 parts"));
        }
        if self.parts.iter().any(|p| p.is_empty()) {
            return Err(self.bad("empty part text"));
        }
        if self.intra_edges.len() != m - 1 {
            return Err(self.bad(format!(
                "{} parts need {} intra edges, found {}",
                m,
                m - 1,
                self.intra_edges.len()
            )));
        }
        let mut head_of = vec![None; m + 1];
        for &(head, dep, _) in &self.intra_edges {
            if head == 0 || head > m || dep == 0 || dep > m {
                return Err(self.bad(format!("part number out of range in edge {head}:{dep}")));
            }
            if head == dep {
                return Err(self.bad(format!("part {dep} is its own head")));
            }
            if head_of[dep].is_some() {
                return Err(self.bad(format!("part {dep} has two heads")));
            }
            head_of[dep] = Some(head);
        }
        let roots: Vec<usize> = (1..=m).filter(|&p| head_of[p].is_none()).collect();
        if roots.len() != 1 {
            return Err(self.bad("intra edges do not form a tree"));
        }
        // With one root and one head per other part, a cycle is the only
        // remaining way to not be a tree.
        for start in 1..=m {
            let mut cur = start;
            let mut steps = 0;
            while let Some(h) = head_of[cur] {
                cur = h;
                steps += 1;
                if steps > m {
                    return Err(self.bad("intra edges contain a cycle"));
                }
            }
        }
        Ok(roots[0])
    }
}

/// Applies every split whose `doc_id` matches, renumbering all downstream
/// EDUs. The root part inherits the original EDU's head and label; other
/// parts attach per the intra edges; dependents of the original EDU move
/// to the root part.
pub fn apply_edu_splits(
    doc: &DepDocument,
    splits: &[EduSplitRecord],
) -> Result<DepDocument, ConvertError> {
    let n = doc.n_edus();
    let mut by_index: BTreeMap<usize, &EduSplitRecord> = BTreeMap::new();
    for split in splits.iter().filter(|s| s.doc_id == doc.doc_id) {
        if split.original_index == 0 || split.original_index > n {
            return Err(ConvertError::IndexOutOfRange(split.original_index));
        }
        if by_index.insert(split.original_index, split).is_some() {
            return Err(split.bad("duplicate split for this EDU"));
        }
    }
    if by_index.is_empty() {
        return Ok(doc.clone());
    }
    let root_parts: BTreeMap<usize, usize> = by_index
        .iter()
        .map(|(&i, s)| s.root_part().map(|r| (i, r)))
        .collect::<Result<_, _>>()?;

    // new_base[i] = new index of original EDU i's first part.
    let mut new_base = vec![0usize; n + 1];
    let mut offset = 0usize;
    for i in 1..=n {
        new_base[i] = i + offset;
        if let Some(split) = by_index.get(&i) {
            offset += split.parts.len() - 1;
        }
    }
    let remap_head = |h: usize| -> usize {
        if h == 0 {
            0
        } else {
            new_base[h] + root_parts.get(&h).map_or(0, |r| r - 1)
        }
    };

    let mut edus = Vec::with_capacity(n + offset);
    let mut edges = Vec::with_capacity(n + offset);
    for i in 1..=n {
        let old_edge = doc.edge(i);
        match by_index.get(&i) {
            None => {
                edus.push(Edu::new(new_base[i], doc.edu(i).text.clone()));
                let mut edge = old_edge.clone();
                edge.head = remap_head(old_edge.head);
                edge.dependent = new_base[i];
                edges.push(edge);
            }
            Some(split) => {
                let base = new_base[i];
                let root_part = root_parts[&i];
                for (p, text) in split.parts.iter().enumerate() {
                    edus.push(Edu::new(base + p, text.clone()));
                }
                let mut inherited = old_edge.clone();
                inherited.head = remap_head(old_edge.head);
                inherited.dependent = base + root_part - 1;
                edges.push(inherited);
                for (head_part, dep_part, label) in &split.intra_edges {
                    edges.push(
                        DepEdge::new(base + head_part - 1, base + dep_part - 1, label.clone())
                            .with_provenance(Provenance::Annotated, Confidence::High),
                    );
                }
            }
        }
    }
    Ok(DepDocument::new(doc.doc_id.clone(), edus, edges)?)
}

pub fn read_edu_splits<R: BufRead>(reader: R) -> Result<Vec<EduSplitRecord>, FormatError> {
    let mut records = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let line_no = i + 1;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 4 {
            return Err(FormatError::syntax(
                line_no,
                format!("expected 4 tab-separated fields, found {}", fields.len()),
            ));
        }
        let original_index: usize = fields[1]
            .parse()
            .map_err(|_| FormatError::syntax(line_no, format!("bad EDU index `{}`", fields[1])))?;
        let parts: Vec<String> = fields[2].split('|').map(str::to_string).collect();
        if parts.iter().any(|p| p.is_empty()) {
            return Err(FormatError::syntax(line_no, "empty part text"));
        }
        let mut intra_edges = Vec::new();
        for spec in fields[3].split(',') {
            let parts3: Vec<&str> = spec.split(':').collect();
            if parts3.len() != 3 || parts3[2].is_empty() {
                return Err(FormatError::syntax(
                    line_no,
                    format!("bad intra edge `{spec}` (expected head:dep:label)"),
                ));
            }
            let head: usize = parts3[0].parse().map_err(|_| {
                FormatError::syntax(line_no, format!("bad part number `{}`", parts3[0]))
            })?;
            let dep: usize = parts3[1].parse().map_err(|_| {
                FormatError::syntax(line_no, format!("bad part number `{}`", parts3[1]))
            })?;
            intra_edges.push((head, dep, parts3[2].to_string()));
        }
        records.push(EduSplitRecord {
            doc_id: fields[0].to_string(),
            original_index,
            parts,
            intra_edges,
        });
    }
    Ok(records)
}

pub fn write_edu_splits<W: Write>(
    records: &[EduSplitRecord],
    mut out: W,
) -> Result<(), FormatError> {
    for r in records {
        for part in &r.parts {
            if part.is_empty() || part.contains(['|', '\t', '\n', '\r']) {
                return Err(FormatError::Unwritable(format!(
                    "part text not serializable: {part:?}"
                )));
            }
        }
        let edges: Vec<String> = r
            .intra_edges
            .iter()
            .map(|(h, d, l)| {
                if l.is_empty() || l.contains([':', ',', '\t', '\n', '\r']) {
                    Err(FormatError::Unwritable(format!(
                        "intra edge label not serializable: {l:?}"
                    )))
                } else {
                    Ok(format!("{h}:{d}:{l}"))
                }
            })
            .collect::<Result<_, _>>()?;
        writeln!(
            out,
            "{}\t{}\t{}\t{}",
            r.doc_id,
            r.original_index,
            r.parts.join("|"),
            edges.join(",")
        )?;
    }
    Ok(())
}
