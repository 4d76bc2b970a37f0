//! JSON documents for scenes and certificates.
//!
//! Scalars travel as plain JSON numbers in the float backend and as
//! `"p/q"` / `"p/q+r/s*sqrt3"` strings in the rational backend; either
//! backend parses both shapes. Emission always goes through the internal
//! types, so re-emitting a parsed document is byte-stable.

use plank_core::certifier::{Certificate, DilationWitness, PeelStep, WidthEntry, WidthKey};
use plank_core::configurations::Scene;
use plank_core::geometry::{ConvexBody, Direction, HalfSpace, Vector};
use plank_core::planks::{BangRatio, Plank};
use plank_core::{Scalar, ScalarRepr};
use serde::{Deserialize, Serialize};

pub const DOC_VERSION: u32 = 1;

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(untagged)]
pub enum ScalarField {
    Num(f64),
    Sym(String),
}

pub fn scalar_field<S: Scalar>(x: &S) -> ScalarField {
    match x.repr() {
        ScalarRepr::Num(v) => ScalarField::Num(v),
        ScalarRepr::Sym(s) => ScalarField::Sym(s),
    }
}

pub fn parse_field<S: Scalar>(f: &ScalarField) -> Result<S, String> {
    let repr = match f {
        ScalarField::Num(v) => ScalarRepr::Num(*v),
        ScalarField::Sym(s) => ScalarRepr::Sym(s.clone()),
    };
    S::parse_repr(&repr).map_err(|e| e.to_string())
}

fn vector_fields<S: Scalar>(v: &Vector<S>) -> Vec<ScalarField> {
    v.coords.iter().map(scalar_field).collect()
}

fn parse_vector<S: Scalar>(fields: &[ScalarField], dim: usize) -> Result<Vector<S>, String> {
    if fields.len() != dim {
        return Err(format!(
            "vector has {} coordinates, expected {dim}",
            fields.len()
        ));
    }
    let coords = fields
        .iter()
        .map(parse_field)
        .collect::<Result<Vec<S>, String>>()?;
    Ok(Vector::new(coords))
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct HalfSpaceDocument {
    pub normal: Vec<ScalarField>,
    pub offset: ScalarField,
}

fn halfspace_doc<S: Scalar>(h: &HalfSpace<S>) -> HalfSpaceDocument {
    HalfSpaceDocument {
        normal: vector_fields(&h.normal),
        offset: scalar_field(&h.offset),
    }
}

fn parse_halfspace<S: Scalar>(doc: &HalfSpaceDocument, dim: usize) -> Result<HalfSpace<S>, String> {
    Ok(HalfSpace::new(
        parse_vector(&doc.normal, dim)?,
        parse_field(&doc.offset)?,
    ))
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct PlankDocument {
    pub normal: Vec<ScalarField>,
    pub lo: ScalarField,
    pub hi: ScalarField,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
#[serde(untagged)]
pub enum BodyDocument {
    Vertices { vertices: Vec<Vec<ScalarField>> },
    Halfspaces { halfspaces: Vec<HalfSpaceDocument> },
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct SceneDocument {
    pub version: u32,
    pub dim: usize,
    pub body: BodyDocument,
    pub planks: Vec<PlankDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

pub fn scene_to_doc<S: Scalar>(scene: &Scene<S>) -> SceneDocument {
    SceneDocument {
        version: DOC_VERSION,
        dim: scene.body.dim(),
        body: BodyDocument::Halfspaces {
            halfspaces: scene.body.halfspaces().iter().map(halfspace_doc).collect(),
        },
        planks: scene
            .planks
            .iter()
            .map(|p| PlankDocument {
                normal: vector_fields(p.direction().unit()),
                lo: scalar_field(p.lo()),
                hi: scalar_field(p.hi()),
            })
            .collect(),
        label: if scene.label.is_empty() {
            None
        } else {
            Some(scene.label.clone())
        },
    }
}

pub fn doc_to_scene<S: Scalar>(doc: &SceneDocument) -> Result<Scene<S>, String> {
    if doc.version != DOC_VERSION {
        return Err(format!("unsupported document version {}", doc.version));
    }
    if doc.dim == 0 {
        return Err("dimension must be positive".into());
    }
    let body = match &doc.body {
        BodyDocument::Halfspaces { halfspaces } => {
            let rows = halfspaces
                .iter()
                .map(|h| parse_halfspace(h, doc.dim))
                .collect::<Result<Vec<_>, _>>()?;
            ConvexBody::new(doc.dim, rows).map_err(|e| e.to_string())?
        }
        BodyDocument::Vertices { vertices } => {
            if doc.dim != 2 {
                return Err("vertex bodies are only supported in dimension 2".into());
            }
            let pts = vertices
                .iter()
                .map(|v| parse_vector::<S>(v, 2))
                .collect::<Result<Vec<_>, _>>()?;
            ConvexBody::new(2, hull_halfspaces(&pts)?).map_err(|e| e.to_string())?
        }
    };
    let planks = doc
        .planks
        .iter()
        .map(|p| {
            Plank::from_raw(
                parse_vector(&p.normal, doc.dim)?,
                parse_field(&p.lo)?,
                parse_field(&p.hi)?,
            )
            .map_err(|e| e.to_string())
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Scene {
        body,
        planks,
        label: doc.label.clone().unwrap_or_default(),
    })
}

/// Outward edge halfspaces of the convex hull, counterclockwise. Exact in
/// the rational backend; hull turns are strict, so collinear interior
/// points are dropped.
fn hull_halfspaces<S: Scalar>(pts: &[Vector<S>]) -> Result<Vec<HalfSpace<S>>, String> {
    let mut sorted: Vec<(S, S)> = pts
        .iter()
        .map(|p| (p.coords[0].clone(), p.coords[1].clone()))
        .collect();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("scalar order is total"));
    sorted.dedup();
    if sorted.len() < 3 {
        return Err("vertex body needs at least 3 distinct points".into());
    }
    let cross = |o: &(S, S), a: &(S, S), b: &(S, S)| -> S {
        (a.0.clone() - o.0.clone()) * (b.1.clone() - o.1.clone())
            - (a.1.clone() - o.1.clone()) * (b.0.clone() - o.0.clone())
    };
    let mut hull: Vec<(S, S)> = Vec::new();
    for pass in [sorted.iter().collect::<Vec<_>>(), sorted.iter().rev().collect()] {
        let start = hull.len();
        for p in pass {
            while hull.len() >= start + 2
                && !(cross(&hull[hull.len() - 2], &hull[hull.len() - 1], p) > S::zero())
            {
                hull.pop();
            }
            hull.push(p.clone());
        }
        hull.pop();
    }
    if hull.len() < 3 {
        return Err("vertex body is degenerate".into());
    }
    let n = hull.len();
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let a = &hull[i];
        let b = &hull[(i + 1) % n];
        let d = (b.0.clone() - a.0.clone(), b.1.clone() - a.1.clone());
        let normal = Vector::new(vec![d.1.clone(), -d.0.clone()]);
        let offset = d.1 * a.0.clone() - d.0 * a.1.clone();
        rows.push(HalfSpace::new(normal, offset));
    }
    Ok(rows)
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct WidthDocument {
    pub key: String,
    pub direction: Vec<ScalarField>,
    pub width: ScalarField,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct WitnessDocument {
    pub h1: HalfSpaceDocument,
    pub h2: HalfSpaceDocument,
    pub p: Vec<ScalarField>,
    pub rho: ScalarField,
    pub containment_margin: ScalarField,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct StepDocument {
    pub plank_index: usize,
    pub rho: ScalarField,
    pub body_before: Vec<HalfSpaceDocument>,
    pub body_after: Vec<HalfSpaceDocument>,
    pub widths_before: Vec<WidthDocument>,
    pub widths_after: Vec<WidthDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dilation: Option<WitnessDocument>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct CertificateDocument {
    pub version: u32,
    pub backend: String,
    pub tolerance: ScalarField,
    pub scene_digest: String,
    pub order: Vec<usize>,
    pub bang_sum: ScalarField,
    pub chain_bound: ScalarField,
    pub verified: bool,
    pub steps: Vec<StepDocument>,
}

fn key_string(key: &WidthKey) -> String {
    match key {
        WidthKey::Plank(i) => format!("plank:{i}"),
        WidthKey::Sample(i) => format!("sample:{i}"),
    }
}

fn parse_key(s: &str) -> Result<WidthKey, String> {
    let bad = || format!("invalid width key {s:?}");
    let (kind, idx) = s.split_once(':').ok_or_else(bad)?;
    let i: usize = idx.parse().map_err(|_| bad())?;
    match kind {
        "plank" => Ok(WidthKey::Plank(i)),
        "sample" => Ok(WidthKey::Sample(i)),
        _ => Err(bad()),
    }
}

fn ratio_field<S: Scalar>(r: &BangRatio<S>) -> ScalarField {
    match r {
        BangRatio::Infinite => ScalarField::Sym("inf".into()),
        BangRatio::Finite(x) => scalar_field(x),
    }
}

fn parse_ratio<S: Scalar>(f: &ScalarField) -> Result<BangRatio<S>, String> {
    if let ScalarField::Sym(s) = f {
        if s == "inf" {
            return Ok(BangRatio::Infinite);
        }
    }
    Ok(BangRatio::Finite(parse_field(f)?))
}

fn width_doc<S: Scalar>(entry: &WidthEntry<S>) -> WidthDocument {
    WidthDocument {
        key: key_string(&entry.key),
        direction: vector_fields(entry.direction.unit()),
        width: scalar_field(&entry.width),
    }
}

fn parse_width<S: Scalar>(doc: &WidthDocument, dim: usize) -> Result<WidthEntry<S>, String> {
    Ok(WidthEntry {
        key: parse_key(&doc.key)?,
        direction: Direction::new(parse_vector(&doc.direction, dim)?).map_err(|e| e.to_string())?,
        width: parse_field(&doc.width)?,
    })
}

fn body_rows<S: Scalar>(body: &ConvexBody<S>) -> Vec<HalfSpaceDocument> {
    body.halfspaces().iter().map(halfspace_doc).collect()
}

fn parse_body<S: Scalar>(rows: &[HalfSpaceDocument], dim: usize) -> Result<ConvexBody<S>, String> {
    let hs = rows
        .iter()
        .map(|h| parse_halfspace(h, dim))
        .collect::<Result<Vec<_>, _>>()?;
    ConvexBody::new(dim, hs).map_err(|e| e.to_string())
}

pub fn cert_to_doc<S: Scalar>(
    cert: &Certificate<S>,
    backend: &str,
    tol: &S,
    scene_digest: &str,
) -> CertificateDocument {
    CertificateDocument {
        version: DOC_VERSION,
        backend: backend.to_string(),
        tolerance: scalar_field(tol),
        scene_digest: scene_digest.to_string(),
        order: cert.order.clone(),
        bang_sum: ratio_field(&cert.bang_sum),
        chain_bound: ratio_field(&cert.chain_bound),
        verified: cert.verified,
        steps: cert
            .steps
            .iter()
            .map(|step| StepDocument {
                plank_index: step.plank_index,
                rho: scalar_field(&step.rho),
                body_before: body_rows(&step.body_before),
                body_after: body_rows(&step.body_after),
                widths_before: step.widths_before.iter().map(width_doc).collect(),
                widths_after: step.widths_after.iter().map(width_doc).collect(),
                dilation: step.dilation.as_ref().map(|w| WitnessDocument {
                    h1: halfspace_doc(&w.h1),
                    h2: halfspace_doc(&w.h2),
                    p: vector_fields(&w.p),
                    rho: scalar_field(&w.rho),
                    containment_margin: scalar_field(&w.containment_margin),
                }),
            })
            .collect(),
    }
}

pub fn doc_to_cert<S: Scalar>(
    doc: &CertificateDocument,
    dim: usize,
) -> Result<Certificate<S>, String> {
    if doc.version != DOC_VERSION {
        return Err(format!("unsupported certificate version {}", doc.version));
    }
    let steps = doc
        .steps
        .iter()
        .map(|s| -> Result<PeelStep<S>, String> {
            Ok(PeelStep {
                plank_index: s.plank_index,
                body_before: parse_body(&s.body_before, dim)?,
                body_after: parse_body(&s.body_after, dim)?,
                rho: parse_field(&s.rho)?,
                widths_before: s
                    .widths_before
                    .iter()
                    .map(|w| parse_width(w, dim))
                    .collect::<Result<Vec<_>, _>>()?,
                widths_after: s
                    .widths_after
                    .iter()
                    .map(|w| parse_width(w, dim))
                    .collect::<Result<Vec<_>, _>>()?,
                dilation: s
                    .dilation
                    .as_ref()
                    .map(|w| -> Result<DilationWitness<S>, String> {
                        Ok(DilationWitness {
                            h1: parse_halfspace(&w.h1, dim)?,
                            h2: parse_halfspace(&w.h2, dim)?,
                            p: parse_vector(&w.p, dim)?,
                            rho: parse_field(&w.rho)?,
                            containment_margin: parse_field(&w.containment_margin)?,
                        })
                    })
                    .transpose()?,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Certificate {
        order: doc.order.clone(),
        steps,
        bang_sum: parse_ratio(&doc.bang_sum)?,
        chain_bound: parse_ratio(&doc.chain_bound)?,
        verified: doc.verified,
    })
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    use sha2::{Digest, Sha256};
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    let mut out = String::with_capacity(64);
    for byte in digest {
        out.push_str(&format!("{byte:02x}"));
    }
    out
}

pub fn to_json_bytes<T: Serialize>(value: &T) -> Vec<u8> {
    let mut text = serde_json::to_string_pretty(value).expect("document serialization");
    text.push('\n');
    text.into_bytes()
}
