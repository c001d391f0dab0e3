//! Output documents. Struct field order fixes the JSON key order, so the
//! rendered output is byte-deterministic for a given input and flag set.

use std::path::Path;

use num_bigint::BigInt;
use serde::Serialize;
use serde_json::Value;

use graphk::limit::{LimitTrace, LimitVerdict};
use graphk::zlinalg::{Extent, FpAbGroup};

#[derive(Debug, Serialize)]
pub struct Document {
    pub command: String,
    pub input: InputDoc,
    pub betti: Option<usize>,
    pub gamma: Option<Value>,
    pub k0: Option<GroupDoc>,
    pub k1: Option<GroupDoc>,
    pub method: Option<String>,
    pub checks: Vec<CheckDoc>,
    pub trace: Option<TraceDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub snf: Option<SnfDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub contract: Option<ContractDoc>,
}

impl Document {
    pub fn new(command: &str, input: InputDoc) -> Self {
        Document {
            command: command.to_string(),
            input,
            betti: None,
            gamma: None,
            k0: None,
            k1: None,
            method: None,
            checks: Vec::new(),
            trace: None,
            snf: None,
            contract: None,
        }
    }

    pub fn all_checks_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

#[derive(Debug, Serialize)]
pub struct InputDoc {
    pub path: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertices: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub geometric_edges: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rays: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trees: Option<usize>,
}

impl InputDoc {
    pub fn graph(path: &Path, vertices: usize, edges: usize, rays: usize, trees: usize) -> Self {
        InputDoc {
            path: path.display().to_string(),
            vertices: Some(vertices),
            geometric_edges: Some(edges),
            rays: Some(rays),
            trees: Some(trees),
        }
    }

    pub fn file(path: &Path) -> Self {
        InputDoc {
            path: path.display().to_string(),
            vertices: None,
            geometric_edges: None,
            rays: None,
            trees: None,
        }
    }
}

/// Group rendering: `{"free_rank": 2 | "omega", "torsion": [2, 6]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupDoc {
    pub free_rank: Value,
    pub torsion: Vec<Value>,
}

pub fn group_doc(g: &FpAbGroup) -> GroupDoc {
    GroupDoc {
        free_rank: extent_value(g.free_rank()),
        torsion: g.torsion().iter().map(int_value).collect(),
    }
}

pub fn extent_value(e: Extent) -> Value {
    match e {
        Extent::Finite(n) => Value::from(n as u64),
        Extent::Omega => Value::String("omega".to_string()),
    }
}

/// Integers render as JSON numbers while they fit one; astronomically large
/// invariant factors fall back to decimal strings rather than lose digits.
pub fn int_value(x: &BigInt) -> Value {
    if let Ok(v) = i64::try_from(x) {
        return Value::from(v);
    }
    if let Ok(v) = u64::try_from(x) {
        return Value::from(v);
    }
    Value::String(x.to_string())
}

#[derive(Debug, Serialize)]
pub struct CheckDoc {
    pub name: String,
    pub pass: bool,
    pub details: String,
}

pub fn check(name: &str, pass: bool, details: String) -> CheckDoc {
    CheckDoc { name: name.to_string(), pass, details }
}

#[derive(Debug, Serialize)]
pub struct ProbeDoc {
    /// Stage offset the image was probed in (stage `step + offset`).
    pub offset: usize,
    pub image: GroupDoc,
}

#[derive(Debug, Serialize)]
pub struct StepDoc {
    pub step: usize,
    pub omega_size: usize,
    pub generators: usize,
    pub group: GroupDoc,
    pub image_probes: Vec<ProbeDoc>,
    pub stable_image: Option<GroupDoc>,
}

#[derive(Debug, Serialize)]
pub struct VerdictDoc {
    pub kind: String,
    pub value: Option<GroupDoc>,
    pub at_step: Option<usize>,
    pub rank_lower_bounds: Option<Vec<usize>>,
}

#[derive(Debug, Serialize)]
pub struct TraceDoc {
    pub steps: Vec<StepDoc>,
    pub verdict: VerdictDoc,
}

pub fn trace_doc(t: &LimitTrace) -> TraceDoc {
    let steps = t
        .steps
        .iter()
        .map(|s| StepDoc {
            step: s.step,
            omega_size: s.omega_size,
            generators: s.generator_count,
            group: group_doc(&s.group),
            image_probes: s
                .image_probes
                .iter()
                .map(|(m, g)| ProbeDoc { offset: *m, image: group_doc(g) })
                .collect(),
            stable_image: s.stable_image.as_ref().map(group_doc),
        })
        .collect();
    let verdict = match &t.verdict {
        LimitVerdict::Stabilized { value, at_step } => VerdictDoc {
            kind: "stabilized".to_string(),
            value: Some(group_doc(value)),
            at_step: Some(*at_step),
            rank_lower_bounds: None,
        },
        LimitVerdict::Diverging { rank_lower_bounds } => VerdictDoc {
            kind: "diverging".to_string(),
            value: None,
            at_step: None,
            rank_lower_bounds: Some(rank_lower_bounds.clone()),
        },
        LimitVerdict::Inconclusive => VerdictDoc {
            kind: "inconclusive".to_string(),
            value: None,
            at_step: None,
            rank_lower_bounds: None,
        },
    };
    TraceDoc { steps, verdict }
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Flat CSV view of a trace, one row per stage.
pub fn trace_csv(t: &LimitTrace) -> String {
    let mut out = String::from("step,omega_size,generators,free_rank,torsion,image_rank,verdict\n");
    let verdict = t.verdict.summary();
    for s in &t.steps {
        let torsion = s
            .group
            .torsion()
            .iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(";");
        let image_rank = s
            .stable_image
            .as_ref()
            .map(|g| g.free_rank().to_string())
            .unwrap_or_default();
        let free_rank = s.group.free_rank().to_string();
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            s.step,
            s.omega_size,
            s.generator_count,
            csv_field(&free_rank),
            csv_field(&torsion),
            csv_field(&image_rank),
            csv_field(&verdict),
        ));
    }
    out
}

#[derive(Debug, Serialize)]
pub struct SnfDoc {
    pub rows: usize,
    pub cols: usize,
    pub rank: usize,
    pub diagonal: Vec<Value>,
}

#[derive(Debug, Serialize)]
pub struct PairDoc {
    pub k0: GroupDoc,
    pub k1: GroupDoc,
}

#[derive(Debug, Serialize)]
pub struct ContractDoc {
    pub edge: String,
    pub before: PairDoc,
    pub after: PairDoc,
}
