//! Plot-ready defect tables.

use serde::Serialize;

/// One measured norm; `slope` is the fitted log-log slope of the series the
/// row belongs to, when there is one.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DefectRow {
    pub identity: String,
    pub kappa: String,
    pub hbar: f64,
    #[serde(rename = "K")]
    pub k: u32,
    pub norm: f64,
    pub slope: Option<f64>,
}

pub fn to_csv(rows: &[DefectRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("rows are plain data");
    }
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("csv output is UTF-8")
}

pub fn to_json(rows: &[DefectRow]) -> String {
    serde_json::to_string_pretty(rows).expect("rows are plain data")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_and_json_carry_the_same_numbers() {
        let rows = vec![
            DefectRow {
                identity: "compose".into(),
                kappa: "1/2".into(),
                hbar: 0.1,
                k: 2,
                norm: 1.25e-4,
                slope: Some(3.01),
            },
            DefectRow {
                identity: "formal_vs_numeric".into(),
                kappa: "0".into(),
                hbar: 0.05,
                k: 0,
                norm: 3e-14,
                slope: None,
            },
        ];
        let csv = to_csv(&rows);
        assert_eq!(csv.lines().next(), Some("identity,kappa,hbar,K,norm,slope"));
        assert!(csv.contains("compose,1/2,0.1,2,0.000125,3.01"));
        assert!(
            csv.contains("formal_vs_numeric,0,0.05,0,3e-14,\n")
                || csv.ends_with("formal_vs_numeric,0,0.05,0,3e-14,\n")
        );
        let json = to_json(&rows);
        assert!(json.contains("\"norm\": 0.000125") && json.contains("\"slope\": null"));
    }
}
