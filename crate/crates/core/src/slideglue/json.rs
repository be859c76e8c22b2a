//! `gluing.v1`: a gluing request (two metric diagrams and a spec) and its result.

use serde::{Deserialize, Serialize};

use super::glue::{glue_metric, glue_signature, GlueOptions, GluedDiagram, GluingSpec};
use crate::diagram::DiagramJson;
use crate::diagram::Signature;
use crate::error::{Error, Result};

pub const GLUING_SCHEMA: &str = "gluing.v1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GluingResultJson {
    pub signature: Signature,
    pub glued: DiagramJson,
    pub located: DiagramJson,
    /// Key of the least cell slide-equivalent to the located one, when classes were computed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class_representative: Option<String>,
    pub slid_endpoints: usize,
    pub collapsed_marks: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GluingJson {
    pub schema: String,
    pub spec: GluingSpec,
    #[serde(default)]
    pub options: GlueOptions,
    pub first: DiagramJson,
    pub second: DiagramJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub result: Option<GluingResultJson>,
}

impl GluingJson {
    pub fn request(first: DiagramJson, second: DiagramJson, spec: GluingSpec, options: GlueOptions) -> Self {
        GluingJson { schema: GLUING_SCHEMA.into(), spec, options, first, second, result: None }
    }

    /// Runs the gluing and stores its result.
    pub fn run(&mut self) -> Result<GluedDiagram> {
        let (x1, x2) = (self.first.to_metric()?, self.second.to_metric()?);
        let r = glue_metric(&x1, &x2, &self.spec, self.options)?;
        self.result = Some(GluingResultJson {
            signature: r.signature,
            glued: DiagramJson::from_metric(&r.glued),
            located: DiagramJson::from_metric(&r.located),
            class_representative: None,
            slid_endpoints: r.slid_endpoints,
            collapsed_marks: r.collapsed_marks,
        });
        Ok(r)
    }

    /// Checks the inputs, the spec against them, and a stored result for
    /// signature consistency. Does not rerun the gluing.
    pub fn validate(&self) -> Result<()> {
        if self.schema != GLUING_SCHEMA {
            return Err(Error::Json(format!("expected schema {GLUING_SCHEMA}, got {}", self.schema)));
        }
        for d in [&self.first, &self.second] {
            d.validate()?;
            if d.coords.is_none() {
                return Err(Error::Json("gluing inputs need coordinates".into()));
            }
        }
        self.spec.check(self.first.dtype.l(), self.second.dtype.k())?;
        if let Some(r) = &self.result {
            let expect = glue_signature(
                self.first.dtype.diagram_signature()?,
                self.second.dtype.diagram_signature()?,
                self.spec.pairs.len(),
            )?;
            if r.signature != expect {
                return Err(Error::Json(format!("result signature {} but the formula gives {expect}", r.signature)));
            }
            for d in [&r.glued, &r.located] {
                d.validate()?;
                if d.dtype.diagram_signature()? != expect {
                    return Err(Error::Json("result diagram has the wrong signature".into()));
                }
            }
            if !r.located.to_metric()?.is_interior() {
                return Err(Error::Json("located diagram is not in an open cell".into()));
            }
        }
        Ok(())
    }

    pub fn parse(s: &str) -> Result<Self> {
        let g: GluingJson = serde_json::from_str(s)?;
        g.validate()?;
        Ok(g)
    }
}

/// Reads a spec either as `{"pairs": [[o, i], …]}` or from a `gluing.v1` document.
pub fn parse_spec(s: &str) -> Result<GluingSpec> {
    let v: serde_json::Value = serde_json::from_str(s)?;
    let inner = if v.get("schema").is_some() { v.get("spec").cloned().unwrap_or(serde_json::Value::Null) } else { v };
    serde_json::from_value(inner).map_err(|e| Error::GluingSpec(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::MetricStringDiagram;
    use crate::moduli::build_complex;
    use crate::slideglue::random_interior_point;
    use rand::SeedableRng;

    fn point(sig: Signature, seed: u64) -> MetricStringDiagram {
        let cx = build_complex(sig).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        random_interior_point(&cx.cells[cx.top_cells()[0]].dtype, &mut rng)
    }

    #[test]
    fn run_round_trip_validate() {
        let x = point(Signature::new(0, 2, 1), 3);
        let mut g = GluingJson::request(
            DiagramJson::from_metric(&x),
            DiagramJson::from_metric(&x),
            GluingSpec { pairs: vec![(0, 1)] },
            GlueOptions::default(),
        );
        g.run().unwrap();
        let s = serde_json::to_string(&g).unwrap();
        let back = GluingJson::parse(&s).unwrap();
        assert_eq!(back, g);
        assert_eq!(back.result.unwrap().signature, Signature::new(0, 3, 1));
        let mut bad = g.clone();
        bad.spec.pairs = vec![(1, 0)];
        assert!(matches!(bad.validate(), Err(Error::GluingSpec(_))));
        let mut bad = g;
        bad.result.as_mut().unwrap().signature = Signature::new(1, 1, 1);
        assert!(bad.validate().is_err());
    }

    #[test]
    fn spec_forms() {
        assert_eq!(parse_spec(r#"{"pairs": [[0, 1]]}"#).unwrap().pairs, vec![(0, 1)]);
        let doc = r#"{"schema": "gluing.v1", "spec": {"pairs": [[2, 0]]}}"#;
        assert_eq!(parse_spec(doc).unwrap().pairs, vec![(2, 0)]);
        assert!(parse_spec(r#"{"pairs": "x"}"#).is_err());
    }
}
