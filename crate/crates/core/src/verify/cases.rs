//! Built-in check cases over catalog fields.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{
    run_check, AntipodalMode, CheckId, EulerInputs, VerifyError, VerifyOptions, VerifyReport,
};
use crate::block::Region;
use crate::field::{catalog, FieldDef};

/// One check applied to one catalog field on one block.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CatalogCase {
    pub check: CheckId,
    pub field: String,
    pub params: BTreeMap<String, f64>,
    pub region: String,
    pub inputs: EulerInputs,
    pub reverse: bool,
    pub mode: Option<AntipodalMode>,
}

impl CatalogCase {
    fn new(check: CheckId, field: &str, region: &str) -> Self {
        CatalogCase {
            check,
            field: field.into(),
            params: BTreeMap::new(),
            region: region.into(),
            inputs: EulerInputs::default(),
            reverse: false,
            mode: None,
        }
    }

    fn param(mut self, k: &str, v: f64) -> Self {
        self.params.insert(k.into(), v);
        self
    }

    fn k_s(mut self, k: i64, s: i64) -> Self {
        self.inputs.chi_k = Some(k);
        self.inputs.chi_s = Some(s);
        self
    }

    fn reversed(mut self) -> Self {
        self.reverse = true;
        self
    }

    /// `check/field[params] region`.
    pub fn label(&self) -> String {
        let params: Vec<String> = self
            .params
            .iter()
            .map(|(k, v)| format!("{}={}", k, v))
            .collect();
        let p = if params.is_empty() {
            String::new()
        } else {
            format!("[{}]", params.join(","))
        };
        format!("{}/{}{} {}", self.check, self.field, p, self.region)
    }

    pub fn build(&self) -> Result<(FieldDef, Region), VerifyError> {
        let f = catalog(&self.field, &self.params)?;
        let r: Region = self.region.parse()?;
        Ok((f, r))
    }

    /// Runs the case with `base` options, applying the case's own overrides.
    pub fn run(&self, base: &VerifyOptions) -> Result<VerifyReport, VerifyError> {
        let (f, r) = self.build()?;
        let mut opts = base.clone();
        opts.reverse = self.reverse;
        if self.mode.is_some() {
            opts.antipodal_mode = self.mode;
        }
        run_check(self.check, &f, &r, &self.inputs, &opts)
    }
}

const BALL2: &str = "ball:0,0:1";
const BALL3: &str = "ball:0,0,0:1";
const SADDLE_BOX: &str = "box:-1,-1:1,1";
const SEGMENT_BOX: &str = "box:-2,-1:2,1";
const ANNULUS: &str = "shell:0,0:0.5:1.5";
const DISK2: &str = "ball:0,0:2";
const LORENZ_BALL: &str = "ball:0,0,0:60";
const LORENZ_BOX: &str = "box:-6,-6,-6:6,6,6";

/// The catalog suite: every check on the blocks where it applies.
pub fn catalog_cases() -> Vec<CatalogCase> {
    use CheckId::*;
    let mut v = Vec::new();
    for (f, r) in [
        ("attractor(2)", BALL2),
        ("attractor(3)", BALL3),
        ("repeller(2)", BALL2),
        ("repeller(3)", BALL3),
        ("saddle2", SADDLE_BOX),
        ("limit_cycle", ANNULUS),
    ] {
        v.push(CatalogCase::new(Conley, f, r));
    }
    v.push(CatalogCase::new(Eq1, "saddle2", SADDLE_BOX).k_s(1, 2));
    v.push(CatalogCase::new(Eq1, "segment_flow", SEGMENT_BOX).k_s(1, 1));
    for (f, r) in [
        ("attractor(2)", BALL2),
        ("attractor(3)", BALL3),
        ("repeller(2)", BALL2),
        ("repeller(3)", BALL3),
    ] {
        v.push(CatalogCase::new(Eq1, f, r));
    }
    v.push(
        CatalogCase::new(Eq1, "lorenz", LORENZ_BALL)
            .param("r", 24.0)
            .k_s(1, 0),
    );
    v.push(
        CatalogCase::new(Eq1, "lorenz", LORENZ_BOX)
            .param("r", 24.0)
            .k_s(-1, 0),
    );
    v.push(
        CatalogCase::new(Eq1, "lorenz", LORENZ_BALL)
            .param("r", 28.0)
            .k_s(1, 0),
    );

    v.push(CatalogCase::new(PlanarBound, "saddle2", SADDLE_BOX).k_s(1, 2));
    v.push(CatalogCase::new(PlanarBound, "segment_flow", SEGMENT_BOX).k_s(1, 1));
    for (f, r) in [
        ("attractor(2)", BALL2),
        ("repeller(2)", BALL2),
        ("limit_cycle", ANNULUS),
        ("limit_cycle", DISK2),
    ] {
        v.push(CatalogCase::new(PlanarBound, f, r));
    }

    v.push(CatalogCase::new(PoincareHopf, "repeller(2)", BALL2));
    v.push(CatalogCase::new(PoincareHopf, "repeller(3)", BALL3));
    v.push(CatalogCase::new(PoincareHopf, "attractor(2)", BALL2).reversed());
    v.push(CatalogCase::new(PoincareHopf, "attractor(3)", BALL3).reversed());
    v.push(CatalogCase::new(PoincareHopf, "limit_cycle", ANNULUS).reversed());
    v.push(CatalogCase::new(PoincareHopf, "limit_cycle", DISK2).reversed());

    for (f, r) in [
        ("saddle2", SADDLE_BOX),
        ("segment_flow", SEGMENT_BOX),
        ("attractor(2)", BALL2),
        ("limit_cycle", ANNULUS),
    ] {
        v.push(CatalogCase::new(Tangency, f, r));
    }

    for (f, r) in [
        ("attractor(2)", BALL2),
        ("repeller(2)", BALL2),
        ("attractor(3)", BALL3),
        ("repeller(3)", BALL3),
        ("limit_cycle", ANNULUS),
    ] {
        v.push(CatalogCase::new(Nonsaddle, f, r));
    }

    let mut seg = CatalogCase::new(Connection, "segment_flow", SEGMENT_BOX).k_s(1, 1);
    seg.inputs.chi_a = Some(1);
    seg.inputs.chi_r = Some(1);
    v.push(seg);
    let mut lc = CatalogCase::new(Connection, "limit_cycle", DISK2).k_s(1, 0);
    lc.inputs.chi_a = Some(0);
    lc.inputs.chi_r = Some(1);
    v.push(lc);
    let mut lz = CatalogCase::new(Connection, "lorenz", LORENZ_BALL)
        .param("r", 24.0)
        .k_s(1, 0);
    lz.inputs.chi_a = Some(2);
    lz.inputs.chi_r = Some(-1);
    v.push(lz);

    v.push(CatalogCase::new(Antipodal, "attractor(2)", BALL2));
    let mut even = CatalogCase::new(Antipodal, "even_field", BALL2);
    even.mode = Some(AntipodalMode::Same);
    v.push(even);
    v.push(
        CatalogCase::new(Antipodal, "lorenz", LORENZ_BALL)
            .param("r", 24.0)
            .k_s(1, 0),
    );
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_check_is_represented_and_cases_build() {
        let cases = catalog_cases();
        for id in CheckId::ALL {
            assert!(cases.iter().any(|c| c.check == id), "{}", id);
        }
        for c in &cases {
            c.build().unwrap_or_else(|e| panic!("{}: {}", c.label(), e));
        }
    }

    #[test]
    fn labels_are_readable() {
        let c = CatalogCase::new(CheckId::Eq1, "lorenz", LORENZ_BALL).param("r", 24.0);
        assert_eq!(c.label(), "eq1/lorenz[r=24] ball:0,0,0:60");
    }
}
