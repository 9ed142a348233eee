//! Plot data for external tools: polylines, scattered points and labels.

use std::path::Path;

use serde::{Deserialize, Serialize};
use tritronquee::stokes::{StokesGraph, Terminus};
use tritronquee::Complex;

use crate::catalog::{pair, Pair};
use crate::error::CliError;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PlotData {
    pub polylines: Vec<Vec<Pair>>,
    pub points: Vec<Pair>,
    pub labels: Vec<String>,
}

impl PlotData {
    pub fn add_polyline(&mut self, pts: &[Complex], label: impl Into<String>) {
        self.polylines.push(pts.iter().copied().map(pair).collect());
        self.labels.push(label.into());
    }

    pub fn add_point(&mut self, z: Complex) {
        self.points.push(pair(z));
    }

    /// Lines labelled `origin->terminus`, turning points as points.
    pub fn from_stokes(g: &StokesGraph) -> Self {
        let mut out = PlotData::default();
        for line in &g.lines {
            let end = match line.terminus {
                Terminus::Asymptotic(j) => format!("inf{j}"),
                Terminus::TurningPoint(i) => format!("tp{i}"),
                Terminus::StepLimit => "stalled".into(),
            };
            out.add_polyline(&line.polyline, format!("tp{}->{end}", line.origin));
        }
        for r in g.turning_points.roots() {
            out.add_point(r);
        }
        out
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        let text = serde_json::to_string(self).expect("plot data serializes");
        std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
    }
}
