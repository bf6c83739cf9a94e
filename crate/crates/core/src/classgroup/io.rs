//! CSV exchange of class-group results: `field_spec, disc, invariant_factors, status`.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::group::AbelianGroupStructure;
use super::order::FieldSpec;
use super::relations::{ClassGroupResult, OracleStatus};
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassGroupRecord {
    pub field_spec: FieldSpec,
    pub disc: i128,
    pub group: AbelianGroupStructure,
    pub status: OracleStatus,
}

impl From<&ClassGroupResult> for ClassGroupRecord {
    fn from(r: &ClassGroupResult) -> Self {
        ClassGroupRecord {
            field_spec: r.spec,
            disc: r.disc,
            group: r.group.clone(),
            status: r.status,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct Row {
    field_spec: String,
    disc: String,
    invariant_factors: String,
    status: String,
}

pub fn write_records<W: Write>(records: &[ClassGroupRecord], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for r in records {
        out.serialize(Row {
            field_spec: r.field_spec.to_string(),
            disc: r.disc.to_string(),
            invariant_factors: r.group.to_string(),
            status: r.status.to_string(),
        })?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_records<R: Read>(r: R) -> Result<Vec<ClassGroupRecord>> {
    let mut rdr = csv::Reader::from_reader(r);
    let mut out = Vec::new();
    for row in rdr.deserialize() {
        let row: Row = row?;
        out.push(ClassGroupRecord {
            field_spec: row.field_spec.parse()?,
            disc: row.disc.trim().parse().map_err(|_| {
                crate::error::Error::domain(format!("bad discriminant {:?}", row.disc))
            })?,
            group: row.invariant_factors.parse()?,
            status: row.status.parse()?,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        let recs = vec![
            ClassGroupRecord {
                field_spec: FieldSpec::Biquadratic(-1, 21),
                disc: 7056,
                group: "[2]".parse().unwrap(),
                status: OracleStatus::Stable,
            },
            ClassGroupRecord {
                field_spec: FieldSpec::Quadratic(-23),
                disc: -23,
                group: "[3]".parse().unwrap(),
                status: OracleStatus::Certified,
            },
        ];
        let mut buf = Vec::new();
        write_records(&recs, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("field_spec,disc,invariant_factors,status\n"));
        assert!(text.contains("-1:21,7056,[2],stable"));
        assert_eq!(read_records(&buf[..]).unwrap(), recs);
    }
}
