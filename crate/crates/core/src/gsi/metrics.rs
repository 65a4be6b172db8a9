use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Per-gate significance record. `gsi` is always `(f + e + (1 - p)) / 3` of
/// the stored components.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateMetrics {
    pub position: usize,
    pub gate: String,
    #[serde(rename = "F")]
    pub f: f64,
    #[serde(rename = "E")]
    pub e: f64,
    #[serde(rename = "P")]
    pub p: f64,
    #[serde(rename = "GSI")]
    pub gsi: f64,
}

impl GateMetrics {
    /// Components are clamped to `[0, 1]` to absorb rounding before the
    /// index is formed.
    pub fn new(position: usize, gate: impl Into<String>, f: f64, e: f64, p: f64) -> Self {
        let f = f.clamp(0.0, 1.0);
        let e = e.clamp(0.0, 1.0);
        let p = p.clamp(0.0, 1.0);
        GateMetrics { position, gate: gate.into(), f, e, p, gsi: combine(f, e, p) }
    }
}

pub fn combine(f: f64, e: f64, p: f64) -> f64 {
    (f + e + (1.0 - p)) / 3.0
}

/// Population standard deviation.
pub fn population_std(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt()
}

/// `(min GSI, max GSI)` over the gates.
pub fn gsi_range(metrics: &[GateMetrics]) -> Result<(f64, f64)> {
    if metrics.is_empty() {
        return Err(Error::EmptyMetrics);
    }
    Ok(metrics.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), m| {
        (lo.min(m.gsi), hi.max(m.gsi))
    }))
}

pub fn write_csv<W: Write>(metrics: &[GateMetrics], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for m in metrics {
        w.serialize(m)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<GateMetrics>> {
    let mut r = csv::Reader::from_reader(input);
    let rows = r.deserialize().collect::<std::result::Result<Vec<GateMetrics>, _>>()?;
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_examples() {
        let one = vec![GateMetrics::new(0, "h", 0.5, 0.0, 0.0)];
        let g = one[0].gsi;
        assert_eq!(gsi_range(&one).unwrap(), (g, g));

        let mut three = Vec::new();
        for (i, target) in [0.52, 0.61, 0.58].into_iter().enumerate() {
            let mut m = GateMetrics::new(i, "p", 0.0, 0.0, 0.0);
            m.gsi = target;
            three.push(m);
        }
        assert_eq!(gsi_range(&three).unwrap(), (0.52, 0.61));
        assert!(matches!(gsi_range(&[]), Err(Error::EmptyMetrics)));
    }

    #[test]
    fn index_is_the_mean_of_components() {
        let m = GateMetrics::new(3, "cx", 0.9, 0.4, 0.2);
        assert_eq!(m.gsi, (0.9 + 0.4 + (1.0 - 0.2)) / 3.0);
    }

    #[test]
    fn population_std_of_three_points() {
        assert_eq!(population_std(&[1.0, 1.0, 1.0]), 0.0);
        let s = population_std(&[1.0, 0.0, 0.0]);
        assert!((s - (2.0f64 / 9.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn csv_columns_and_round_trip() {
        let rows = vec![GateMetrics::new(0, "h", 0.5, 0.0, 0.0), GateMetrics::new(1, "p", 1.0, 0.3, 0.01)];
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("position,gate,F,E,P,GSI\n"));
        assert_eq!(read_csv(&buf[..]).unwrap(), rows);
    }
}
