//! JSON wire formats shared with the command-line front end.
//!
//! Inputs are declarative specs: a quiver lists vertices and arrows, an
//! object gives its dimension (plus the square-zero action over the dual
//! numbers), a representation assigns objects to vertices and row-major
//! matrices to arrow ids — omitted arrows mean the zero map, and the base
//! (kind and modulus) may be stated once on the representation instead of
//! on every object.  Emission goes through `serde_json` maps that keep
//! insertion order, so reports serialize byte-identically across runs.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::base::{BaseMorphism, BaseObject, BaseSES, Instance};
use crate::construct::{Certificate, ConstructionTrace, TowerKind, VertexStep};
use crate::error::Error;
use crate::fp::Mat;
use crate::quiver::Quiver;
use crate::rep::{RepSES, Representation};

fn bad(msg: impl std::fmt::Display) -> Error {
    Error::Shape(msg.to_string())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ArrowSpec {
    pub id: String,
    pub src: String,
    pub tgt: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QuiverSpec {
    pub vertices: Vec<String>,
    pub arrows: Vec<ArrowSpec>,
}

impl QuiverSpec {
    pub fn of(q: &Quiver) -> QuiverSpec {
        QuiverSpec {
            vertices: q.vertices().to_vec(),
            arrows: q
                .arrows()
                .iter()
                .map(|a| ArrowSpec {
                    id: a.id.clone(),
                    src: q.vertex_name(a.src).to_string(),
                    tgt: q.vertex_name(a.tgt).to_string(),
                })
                .collect(),
        }
    }

    pub fn to_quiver(&self) -> Result<Quiver, Error> {
        Quiver::new(
            self.vertices.clone(),
            self.arrows
                .iter()
                .map(|a| (a.id.clone(), a.src.clone(), a.tgt.clone()))
                .collect::<Vec<_>>(),
        )
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BaseSpec {
    pub kind: String,
    pub p: u64,
}

impl BaseSpec {
    pub fn of(instance: Instance) -> BaseSpec {
        BaseSpec { kind: instance.name().to_string(), p: instance.p() }
    }

    pub fn to_instance(&self) -> Result<Instance, Error> {
        instance_by_name(&self.kind, self.p)
    }
}

pub fn instance_by_name(kind: &str, p: u64) -> Result<Instance, Error> {
    match kind {
        "finvect" => Instance::finvect(p),
        "dual" => Instance::dual_numbers(p),
        other => Err(Error::Unsupported(format!("unknown base kind `{other}`"))),
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ObjectSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nil: Option<Vec<Vec<u64>>>,
}

impl ObjectSpec {
    pub fn of(o: &BaseObject) -> ObjectSpec {
        ObjectSpec {
            kind: Some(o.instance().name().to_string()),
            p: Some(o.instance().p()),
            dim: o.dim(),
            nil: o.nil().map(Mat::to_rows),
        }
    }

    /// Resolve against an optional ambient instance; the file's own
    /// `kind`/`p` take precedence when present.
    pub fn resolve(&self, ambient: Option<Instance>) -> Result<BaseObject, Error> {
        let instance = match (&self.kind, self.p) {
            (Some(kind), Some(p)) => instance_by_name(kind, p)?,
            (Some(kind), None) => {
                let p = ambient.map(Instance::p).ok_or_else(|| bad("object needs a modulus"))?;
                instance_by_name(kind, p)?
            }
            (None, Some(p)) => {
                let a = ambient.ok_or_else(|| bad("object needs a base kind"))?;
                instance_by_name(a.name(), p)?
            }
            (None, None) => ambient.ok_or_else(|| bad("object needs a base"))?,
        };
        match &self.nil {
            None if instance.is_dual() => {
                BaseObject::module(instance, self.dim, Mat::zeros(instance.p(), self.dim, self.dim))
            }
            None => Ok(BaseObject::vector_space(instance, self.dim)),
            Some(_) if !instance.is_dual() => {
                Err(bad("a plain vector space does not carry a nil action"))
            }
            Some(rows) => {
                BaseObject::module(instance, self.dim, shaped_matrix(instance.p(), self.dim, self.dim, rows)?)
            }
        }
    }
}

fn shaped_matrix(p: u64, rows: usize, cols: usize, data: &[Vec<u64>]) -> Result<Mat, Error> {
    if data.len() != rows {
        return Err(bad(format!("expected {rows} matrix rows, got {}", data.len())));
    }
    if let Some(r) = data.iter().find(|r| r.len() != cols) {
        return Err(bad(format!("expected {cols} matrix columns, got {}", r.len())));
    }
    Mat::from_rows(p, data)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RepSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quiver: Option<QuiverSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<BaseSpec>,
    pub objects: Vec<ObjectSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub maps: Option<Map<String, Value>>,
}

impl RepSpec {
    pub fn of(rep: &Representation) -> RepSpec {
        let mut maps = Map::new();
        for (k, arrow) in rep.quiver().arrows().iter().enumerate() {
            maps.insert(arrow.id.clone(), json!(rep.arrow_map(k).matrix().to_rows()));
        }
        RepSpec {
            quiver: Some(QuiverSpec::of(rep.quiver())),
            base: Some(BaseSpec::of(rep.instance())),
            objects: rep
                .objects()
                .iter()
                .map(|o| ObjectSpec {
                    kind: None,
                    p: None,
                    dim: o.dim(),
                    nil: o.nil().map(Mat::to_rows),
                })
                .collect(),
            maps: Some(maps),
        }
    }

    /// Resolve against an optional ambient quiver and instance, both
    /// overridden by inline data when present.
    pub fn resolve(
        &self,
        ambient_quiver: Option<Arc<Quiver>>,
        ambient_instance: Option<Instance>,
    ) -> Result<Representation, Error> {
        let quiver = match &self.quiver {
            Some(spec) => Arc::new(spec.to_quiver()?),
            None => ambient_quiver.ok_or_else(|| bad("representation needs a quiver"))?,
        };
        let instance = match &self.base {
            Some(spec) => spec.to_instance()?,
            None => ambient_instance.ok_or_else(|| bad("representation needs a base"))?,
        };
        if self.objects.len() != quiver.vertex_count() {
            return Err(bad(format!(
                "expected {} vertex objects, got {}",
                quiver.vertex_count(),
                self.objects.len()
            )));
        }
        let objects: Vec<BaseObject> = self
            .objects
            .iter()
            .map(|o| o.resolve(Some(instance)))
            .collect::<Result<_, _>>()?;
        let empty = Map::new();
        let given = self.maps.as_ref().unwrap_or(&empty);
        for id in given.keys() {
            quiver.arrow_index(id)?;
        }
        let mut maps = Vec::with_capacity(quiver.arrow_count());
        for arrow in quiver.arrows() {
            let src = &objects[arrow.src];
            let tgt = &objects[arrow.tgt];
            let mat = match given.get(&arrow.id) {
                Some(v) => {
                    let rows: Vec<Vec<u64>> =
                        serde_json::from_value(v.clone()).map_err(|e| bad(format!("map `{}`: {e}", arrow.id)))?;
                    shaped_matrix(instance.p(), tgt.dim(), src.dim(), &rows)?
                }
                None => Mat::zeros(instance.p(), tgt.dim(), src.dim()),
            };
            maps.push(BaseMorphism::new(src.clone(), tgt.clone(), mat)?);
        }
        Representation::new(quiver, instance, objects, maps)
    }
}

pub fn parse_quiver(text: &str) -> Result<Quiver, Error> {
    let spec: QuiverSpec = serde_json::from_str(text).map_err(bad)?;
    spec.to_quiver()
}

pub fn parse_object(text: &str, ambient: Option<Instance>) -> Result<BaseObject, Error> {
    let spec: ObjectSpec = serde_json::from_str(text).map_err(bad)?;
    spec.resolve(ambient)
}

pub fn parse_rep(
    text: &str,
    ambient_quiver: Option<Arc<Quiver>>,
    ambient_instance: Option<Instance>,
) -> Result<Representation, Error> {
    let spec: RepSpec = serde_json::from_str(text).map_err(bad)?;
    spec.resolve(ambient_quiver, ambient_instance)
}

pub fn object_json(o: &BaseObject) -> Value {
    let mut m = Map::new();
    m.insert("kind".into(), json!(o.instance().name()));
    m.insert("p".into(), json!(o.instance().p()));
    m.insert("dim".into(), json!(o.dim()));
    if let Some(nil) = o.nil() {
        m.insert("nil".into(), json!(nil.to_rows()));
    }
    Value::Object(m)
}

pub fn morphism_json(f: &BaseMorphism) -> Value {
    json!({
        "rows": f.matrix().rows(),
        "cols": f.matrix().cols(),
        "matrix": f.matrix().to_rows(),
    })
}

pub fn base_ses_json(s: &BaseSES) -> Value {
    let mut m = Map::new();
    m.insert("sub".into(), object_json(s.sub()));
    m.insert("middle".into(), object_json(s.middle()));
    m.insert("quotient".into(), object_json(s.quotient()));
    m.insert("mono".into(), morphism_json(s.mono()));
    m.insert("epi".into(), morphism_json(s.epi()));
    Value::Object(m)
}

pub fn rep_json(r: &Representation) -> Value {
    serde_json::to_value(RepSpec::of(r)).expect("representation specs always serialize")
}

pub fn rep_morphism_json(f: &crate::rep::RepMorphism) -> Value {
    let quiver = f.domain().quiver();
    let mut comps = Map::new();
    for v in 0..quiver.vertex_count() {
        comps.insert(quiver.vertex_name(v).to_string(), morphism_json(f.component(v)));
    }
    Value::Object(comps)
}

pub fn rep_ses_json(s: &RepSES) -> Value {
    let mut m = Map::new();
    m.insert("sub".into(), rep_json(s.sub()));
    m.insert("middle".into(), rep_json(s.middle()));
    m.insert("quotient".into(), rep_json(s.quotient()));
    m.insert("mono".into(), rep_morphism_json(s.mono()));
    m.insert("epi".into(), rep_morphism_json(s.epi()));
    Value::Object(m)
}

pub fn certificate_json(c: &Certificate) -> Value {
    json!({
        "checks": c
            .checks
            .iter()
            .map(|ch| json!({"name": ch.name, "pass": ch.pass, "detail": ch.detail}))
            .collect::<Vec<_>>(),
        "pass": c.pass,
    })
}

fn step_json(quiver: &Quiver, s: &VertexStep) -> Value {
    let mut m = Map::new();
    m.insert("vertex".into(), json!(quiver.vertex_name(s.vertex)));
    m.insert("sum".into(), object_json(&s.sum));
    m.insert("filler".into(), object_json(&s.filler));
    m.insert("residue".into(), object_json(&s.residue));
    m.insert("snake".into(), base_ses_json(&s.snake));
    m.insert("structural".into(), morphism_json(&s.structural));
    m.insert("induced".into(), object_json(&s.induced));
    if let Some(up) = &s.upgrade {
        m.insert(
            "upgrade".into(),
            json!({"witness": object_json(&up.witness), "iso": morphism_json(&up.iso)}),
        );
    }
    Value::Object(m)
}

pub fn trace_json(t: &ConstructionTrace) -> Value {
    let quiver = t.result().middle().quiver().clone();
    let names = |vs: &[usize]| -> Vec<String> {
        vs.iter().map(|&v| quiver.vertex_name(v).to_string()).collect()
    };
    let mut m = Map::new();
    m.insert(
        "kind".into(),
        json!(match t.kind {
            TowerKind::Cover => "precover",
            TowerKind::Envelope => "preenvelope",
        }),
    );
    m.insert("oracle".into(), json!(t.oracle));
    m.insert(
        "levels".into(),
        Value::Array(
            t.levels
                .iter()
                .map(|level| {
                    let mut lm = Map::new();
                    lm.insert("index".into(), json!(level.index));
                    lm.insert("covered".into(), json!(names(&level.covered)));
                    lm.insert("repaired".into(), json!(names(&level.repaired)));
                    lm.insert(
                        "steps".into(),
                        Value::Array(level.steps.iter().map(|s| step_json(&quiver, s)).collect()),
                    );
                    lm.insert("sequence".into(), rep_ses_json(&level.ses));
                    Value::Object(lm)
                })
                .collect(),
        ),
    );
    m.insert("certificate".into(), certificate_json(&t.certificate));
    Value::Object(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::oracle::pair_by_name;
    use crate::construct::phi_precover;
    use crate::sample::{a2_quiver, demo_quiver};

    #[test]
    fn quiver_round_trips() {
        let q = demo_quiver();
        let text = serde_json::to_string(&QuiverSpec::of(&q)).unwrap();
        let back = parse_quiver(&text).unwrap();
        assert_eq!(*q, back);
    }

    #[test]
    fn rep_round_trips_with_inline_everything() {
        let dual = Instance::dual_numbers(3).unwrap();
        let q = a2_quiver();
        let free = dual.free_object(1);
        let k = BaseObject::vector_space(dual, 1);
        // the counit Λ → k
        let counit = BaseMorphism::new(free.clone(), k.clone(), Mat::from_rows(3, &[vec![1, 0]]).unwrap()).unwrap();
        let rep = Representation::new(q, dual, vec![free, k], vec![counit]).unwrap();
        let text = serde_json::to_string(&RepSpec::of(&rep)).unwrap();
        let back = parse_rep(&text, None, None).unwrap();
        assert_eq!(rep, back);
    }

    #[test]
    fn omitted_maps_default_to_zero_and_base_is_inherited() {
        let text = r#"{"objects": [{"dim": 1}, {"dim": 2}]}"#;
        let fv = Instance::finvect(5).unwrap();
        let rep = parse_rep(text, Some(a2_quiver()), Some(fv)).unwrap();
        assert_eq!(rep.dims(), vec![1, 2]);
        assert!(rep.arrow_map(0).matrix().is_zero());
    }

    #[test]
    fn unknown_arrow_ids_are_rejected() {
        let text = r#"{"objects": [{"dim": 1}, {"dim": 1}], "maps": {"zz": [[1]]}}"#;
        let fv = Instance::finvect(2).unwrap();
        assert!(parse_rep(text, Some(a2_quiver()), Some(fv)).is_err());
    }

    #[test]
    fn dual_objects_need_square_zero_actions() {
        let dual = Instance::dual_numbers(2).unwrap();
        let ok = parse_object(r#"{"dim": 2, "nil": [[0,0],[1,0]]}"#, Some(dual)).unwrap();
        assert!(ok.is_free());
        assert!(parse_object(r#"{"dim": 2, "nil": [[0,1],[1,0]]}"#, Some(dual)).is_err());
        // no nil means the trivial action over the dual numbers
        let triv = parse_object(r#"{"dim": 2}"#, Some(dual)).unwrap();
        assert_eq!(triv.nil_rank(), 0);
    }

    #[test]
    fn trace_serialization_is_deterministic() {
        let fv = Instance::finvect(2).unwrap();
        let q = demo_quiver();
        let x = Representation::stalk(q, 3, BaseObject::vector_space(fv, 2));
        let pair = pair_by_name(fv, "all-all").unwrap();
        let trace = phi_precover(&x, &pair).unwrap();
        let a = serde_json::to_string_pretty(&trace_json(&trace)).unwrap();
        let b = serde_json::to_string_pretty(&trace_json(&phi_precover(&x, &pair).unwrap())).unwrap();
        assert_eq!(a, b);
        let v: Value = serde_json::from_str(&a).unwrap();
        assert_eq!(v["kind"], "precover");
        assert_eq!(v["certificate"]["pass"], true);
        assert!(v["levels"].as_array().unwrap().len() >= 1);
    }
}
