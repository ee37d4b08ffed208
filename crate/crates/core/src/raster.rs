//! Grids of certified-outside cells for plane curves.

use std::fmt::Write;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lopsided::{default_d_prime, default_slack, is_lopsided, is_superlopsided};
use crate::poly::{LaurentPolynomial, MagnitudeEvaluator};
use crate::resultant::{cyclic_resultant_with_health, ResultantOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RasterMode {
    /// Outside `LA_{Res_n[f]}`.
    La,
    /// Outside `SA_{Res_n[f]}`.
    Sa,
}

impl RasterMode {
    pub fn as_str(self) -> &'static str {
        match self {
            RasterMode::La => "la",
            RasterMode::Sa => "sa",
        }
    }
}

impl std::str::FromStr for RasterMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "la" => Ok(RasterMode::La),
            "sa" => Ok(RasterMode::Sa),
            other => Err(Error::InvalidArgument(format!("unknown raster mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RasterSpec {
    /// `[x0, y0, x1, y1]`.
    pub bbox: [f64; 4],
    pub width: usize,
    pub height: usize,
    pub mode: RasterMode,
    pub n: u64,
    pub slack: Option<f64>,
    /// Worker threads; the global pool when `None`.
    pub jobs: Option<usize>,
    pub resultant: ResultantOptions,
}

impl RasterSpec {
    pub fn new(bbox: [f64; 4], width: usize, height: usize, mode: RasterMode, n: u64) -> Self {
        Self { bbox, width, height, mode, n, slack: None, jobs: None, resultant: ResultantOptions::default() }
    }

    /// Centre of cell `(row, col)`; row 0 is at the bottom edge `y0`.
    pub fn cell_center(&self, row: usize, col: usize) -> [f64; 2] {
        let [x0, y0, x1, y1] = self.bbox;
        let dx = (x1 - x0) / self.width as f64;
        let dy = (y1 - y0) / self.height as f64;
        [x0 + (col as f64 + 0.5) * dx, y0 + (row as f64 + 0.5) * dy]
    }
}

/// Row-major grid: `true` where the cell centre is certified outside.
#[derive(Debug, Clone, PartialEq)]
pub struct Raster {
    pub spec: RasterSpec,
    pub cells: Vec<bool>,
}

impl Raster {
    pub fn get(&self, row: usize, col: usize) -> bool {
        self.cells[row * self.spec.width + col]
    }

    pub fn to_csv(&self) -> String {
        let s = &self.spec;
        let [x0, y0, x1, y1] = s.bbox;
        let mut out = format!("# bbox={x0},{y0},{x1},{y1} res={}x{} n={} mode={}\n", s.width, s.height, s.n, s.mode.as_str());
        for row in self.cells.chunks(s.width) {
            let line: Vec<&str> = row.iter().map(|&c| if c { "1" } else { "0" }).collect();
            writeln!(out, "{}", line.join(",")).expect("writing to a string");
        }
        out
    }
}

pub fn rasterize(f: &LaurentPolynomial, spec: &RasterSpec) -> Result<Raster> {
    if f.nvars() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: f.nvars() });
    }
    if spec.width == 0 || spec.height == 0 {
        return Err(Error::InvalidArgument("resolution must be positive".into()));
    }
    let [x0, y0, x1, y1] = spec.bbox;
    if !(x1 > x0 && y1 > y0) || spec.bbox.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument(format!("degenerate bounding box {:?}", spec.bbox)));
    }
    let res = cyclic_resultant_with_health(f, spec.n, &spec.resultant)?.0;
    let eval = MagnitudeEvaluator::new(&res)?;
    let slack = spec.slack.unwrap_or_else(|| default_slack(f.precision()));
    let d_prime = default_d_prime(res.len());
    let compute = || -> Result<Vec<bool>> {
        (0..spec.width * spec.height)
            .into_par_iter()
            .map(|i| {
                let point = spec.cell_center(i / spec.width, i % spec.width);
                let list = eval.at(&point)?;
                let verdict = match spec.mode {
                    RasterMode::La => is_lopsided(&list, slack)?,
                    RasterMode::Sa => is_superlopsided(&list, d_prime, slack)?,
                };
                Ok(verdict.lopsided)
            })
            .collect()
    };
    let cells = match spec.jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?
            .install(compute)?,
        None => compute()?,
    };
    Ok(Raster { spec: spec.clone(), cells })
}
