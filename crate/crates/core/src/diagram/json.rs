//! `diagram.v1`: a type, optionally with metric coordinates.

use serde::{Deserialize, Serialize};

use super::{MetricStringDiagram, Signature, StringDiagramType};
use crate::error::{Error, Result};
use crate::rational::RatStr;

pub const DIAGRAM_SCHEMA: &str = "diagram.v1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoordsJson {
    pub t: Vec<Vec<RatStr>>,
    pub p: Vec<RatStr>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramJson {
    pub schema: String,
    #[serde(flatten)]
    pub dtype: StringDiagramType,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signature: Option<Signature>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coords: Option<CoordsJson>,
}

impl DiagramJson {
    pub fn from_type(g: &StringDiagramType) -> Self {
        DiagramJson {
            schema: DIAGRAM_SCHEMA.into(),
            dtype: g.clone(),
            signature: g.diagram_signature().ok(),
            coords: None,
        }
    }

    pub fn from_metric(x: &MetricStringDiagram) -> Self {
        let mut d = Self::from_type(&x.dtype);
        d.coords = Some(CoordsJson {
            t: x.t.iter().map(|ti| ti.iter().cloned().map(RatStr).collect()).collect(),
            p: x.p.iter().cloned().map(RatStr).collect(),
        });
        d
    }

    /// Parses and validates: schema tag, type invariants, the optional
    /// signature against the computed one, and coordinates if present.
    pub fn parse(s: &str) -> Result<Self> {
        let d: DiagramJson = serde_json::from_str(s)?;
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        let d = self;
        if d.schema != DIAGRAM_SCHEMA {
            return Err(Error::Json(format!("expected schema {DIAGRAM_SCHEMA}, got {}", d.schema)));
        }
        let sig = d.dtype.diagram_signature()?;
        if let Some(claimed) = d.signature {
            if claimed != sig {
                return Err(Error::MalformedType(format!("declared signature {claimed} but diagram has {sig}")));
            }
        }
        if d.coords.is_some() {
            d.to_metric()?;
        }
        Ok(())
    }

    pub fn to_metric(&self) -> Result<MetricStringDiagram> {
        let c = self
            .coords
            .as_ref()
            .ok_or_else(|| Error::Json("diagram has no coords".into()))?;
        MetricStringDiagram::new(
            self.dtype.clone(),
            c.t.iter().map(|ti| ti.iter().map(|r| r.0.clone()).collect()).collect(),
            c.p.iter().map(|r| r.0.clone()).collect(),
        )
    }

    pub fn to_string_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("diagram serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::t3_generic;
    use super::*;
    use crate::rational::rat;

    #[test]
    fn metric_round_trip() {
        let x = MetricStringDiagram::new(
            t3_generic(),
            vec![vec![rat(1, 2), rat(1, 2)], vec![rat(1, 3), rat(2, 3)]],
            vec![rat(1, 4)],
        )
        .unwrap();
        let s = DiagramJson::from_metric(&x).to_string_pretty();
        assert!(s.contains("\"1/3\""));
        let back = DiagramJson::parse(&s).unwrap().to_metric().unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn rejects_wrong_schema_and_signature() {
        let mut d = DiagramJson::from_type(&t3_generic());
        d.schema = "diagram.v0".into();
        assert!(DiagramJson::parse(&serde_json::to_string(&d).unwrap()).is_err());
        d.schema = DIAGRAM_SCHEMA.into();
        d.signature = Some(Signature::new(1, 2, 1));
        assert!(DiagramJson::parse(&serde_json::to_string(&d).unwrap()).is_err());
        d.signature = None;
        assert!(DiagramJson::parse(&serde_json::to_string(&d).unwrap()).is_ok());
    }
}
