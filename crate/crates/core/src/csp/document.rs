use serde::{Deserialize, Serialize};

use crate::{Error, Result};

use super::{Clause, ClauseId, CspInstance};

pub const INSTANCE_FORMAT: &str = "cfl-instance";
pub const INSTANCE_VERSION: u32 = 1;

/// Versioned JSON form of a [`CspInstance`]. Clause `kind` tags drive
/// reconstruction.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InstanceDocument {
    pub format: String,
    pub version: u32,
    pub domains: Vec<u32>,
    pub clauses: Vec<Clause>,
    pub participation: Vec<Vec<ClauseId>>,
}

impl From<&CspInstance> for InstanceDocument {
    fn from(inst: &CspInstance) -> Self {
        InstanceDocument {
            format: INSTANCE_FORMAT.to_string(),
            version: INSTANCE_VERSION,
            domains: inst.domains.clone(),
            clauses: inst.clauses.clone(),
            participation: inst.participation.clone(),
        }
    }
}

impl TryFrom<InstanceDocument> for CspInstance {
    type Error = Error;

    fn try_from(doc: InstanceDocument) -> Result<Self> {
        if doc.format != INSTANCE_FORMAT {
            return Err(Error::usage(format!(
                "unknown instance format {:?}",
                doc.format
            )));
        }
        if doc.version != INSTANCE_VERSION {
            return Err(Error::usage(format!(
                "unsupported instance version {}",
                doc.version
            )));
        }
        // Re-run the per-kind checks that deserialization bypasses.
        let clauses = doc
            .clauses
            .into_iter()
            .map(|c| Clause::new(c.scope, c.kind))
            .collect::<Result<Vec<_>>>()?;
        CspInstance::new(doc.domains, clauses, doc.participation)
    }
}

impl CspInstance {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&InstanceDocument::from(self))
            .expect("instance serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: InstanceDocument = serde_json::from_str(text)?;
        CspInstance::try_from(doc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::csp::{ClauseKind, Gf2Target, Literal};

    #[test]
    fn json_round_trip_all_kinds() {
        let clauses = vec![
            Clause::not_equal(0, 1).unwrap(),
            Clause::channel_conflict(1, 2, 3).unwrap(),
            Clause::channel_band(0, &[1, 2], 2).unwrap(),
            Clause::custom(vec![2], vec![vec![4], vec![1]]).unwrap(),
            Clause::new(
                vec![3, 4],
                ClauseKind::Gf2Realizability {
                    flows: 2,
                    fixed_rows: vec![1],
                    target: Gf2Target::OwnCoding,
                },
            )
            .unwrap(),
            Clause::new(
                vec![4],
                ClauseKind::Gf2Realizability {
                    flows: 2,
                    fixed_rows: vec![],
                    target: Gf2Target::Flow(1),
                },
            )
            .unwrap(),
            Clause::ksat(vec![Literal::positive(5), Literal::negative(6)]).unwrap(),
        ];
        let inst = CspInstance::from_scopes(vec![4, 4, 4, 4, 4, 2, 2], clauses).unwrap();
        let text = inst.to_json();
        assert!(text.contains("\"kind\": \"gf2-realizability\""));
        let back = CspInstance::from_json(&text).unwrap();
        assert_eq!(back, inst);
    }

    #[test]
    fn rejects_foreign_documents() {
        let inst = CspInstance::uniform(1, 2, vec![]).unwrap();
        let text = inst.to_json().replace("cfl-instance", "other");
        assert!(CspInstance::from_json(&text).is_err());
        let text = inst.to_json().replace("\"version\": 1", "\"version\": 9");
        assert!(CspInstance::from_json(&text).is_err());
    }
}
