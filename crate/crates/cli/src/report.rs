//! The decomposition report and its text rendering.
//!
//! Model coordinates are ordered `(m basis, n basis, m* dual basis, N1 basis)`.
//! Subspace bases are canonical (reduced row echelon), so equal subspaces
//! always print identically.

use std::fmt::Write as _;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use wittartin_core::exactlin::format_scalar;
use wittartin_core::suite::{verify_instance, VerifyOptions};
use wittartin_core::wittartin::slice_form;
use wittartin_core::{
    build_chain, build_model, decompose_g, decompose_h, CheckReport, Matrix, ProblemInstance, Scalar, Subspace,
};

pub const REPORT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Space {
    pub name: String,
    pub dim: usize,
    pub basis: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimEntry {
    pub name: String,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceEcho {
    pub dim: usize,
    pub h_basis: Vec<Vec<String>>,
    pub gm_basis: Vec<Vec<String>>,
    pub mu: Vec<String>,
    pub inner_product: Vec<Vec<String>>,
    pub slice_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionG {
    pub blocks: Vec<Space>,
    pub gram_t1: Vec<Vec<String>>,
    pub gram_n1: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionH {
    pub blocks: Vec<Space>,
    /// `omega` on `N1_tilde` in the block basis `(s·m, b·m, Y_m, N1)`.
    pub slice_form: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckEntry {
    pub name: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub report_version: u32,
    pub instance: InstanceEcho,
    pub model_dim: usize,
    pub dims: Vec<DimEntry>,
    pub chain: Vec<Space>,
    pub decomposition_g: Option<DecompositionG>,
    pub decomposition_h: Option<DecompositionH>,
    pub checks: Vec<CheckEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
}

fn strings(v: &[Scalar]) -> Vec<String> {
    v.iter().map(format_scalar).collect()
}

fn grid(m: &Matrix) -> Vec<Vec<String>> {
    m.to_strings()
}

fn space(name: &str, s: &Subspace) -> Space {
    Space {
        name: name.to_string(),
        dim: s.dim(),
        basis: s.vectors().iter().map(|v| strings(v)).collect(),
    }
}

fn checks(rep: &CheckReport) -> Vec<CheckEntry> {
    rep.checks
        .iter()
        .map(|c| CheckEntry {
            name: c.name.clone(),
            passed: c.passed,
            detail: c.detail.clone(),
        })
        .collect()
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn dim(&self, name: &str) -> Option<usize> {
        self.dims.iter().find(|d| d.name == name).map(|d| d.dim)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let i = &self.instance;
        let _ = writeln!(out, "instance: dim g = {}, dim h = {}, dim g_m = {}, dim N1 = {}", i.dim, i.h_basis.len(), i.gm_basis.len(), i.slice_dim);
        let _ = writeln!(out, "mu = ({})", i.mu.join(", "));
        let _ = writeln!(out, "\ndimensions");
        for d in &self.dims {
            let _ = writeln!(out, "  {:<22} {}", d.name, d.dim);
        }
        let _ = writeln!(out, "\nsplitting of g");
        for s in &self.chain {
            write_space(&mut out, s);
        }
        if let Some(g) = &self.decomposition_g {
            let _ = writeln!(out, "\nWitt-Artin decomposition for G (model dim {})", self.model_dim);
            for s in &g.blocks {
                write_space(&mut out, s);
            }
            write_grid(&mut out, "omega on T1", &g.gram_t1);
            write_grid(&mut out, "omega on N1", &g.gram_n1);
        }
        if let Some(h) = &self.decomposition_h {
            let _ = writeln!(out, "\nWitt-Artin decomposition for H");
            for s in &h.blocks {
                write_space(&mut out, s);
            }
            write_grid(&mut out, "omega on N1_tilde (s.m, b.m, Y_m, N1)", &h.slice_form);
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        let _ = writeln!(out, "\nchecks: {} run, {} failed", self.checks.len(), failed);
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            match &c.detail {
                Some(d) => {
                    let _ = writeln!(out, "  {tag} {} ({d})", c.name);
                }
                None => {
                    let _ = writeln!(out, "  {tag} {}", c.name);
                }
            }
        }
        if let Some(t) = self.timing_ms {
            let _ = writeln!(out, "\ntime: {t} ms");
        }
        out
    }
}

fn write_space(out: &mut String, s: &Space) {
    let basis: Vec<String> = s.basis.iter().map(|v| format!("({})", v.join(", "))).collect();
    let _ = writeln!(out, "  {:<22} dim {}  {}", s.name, s.dim, basis.join(" "));
}

fn write_grid(out: &mut String, title: &str, g: &[Vec<String>]) {
    let _ = writeln!(out, "  {title}:");
    if g.is_empty() {
        let _ = writeln!(out, "    (empty)");
    }
    for row in g {
        let _ = writeln!(out, "    [{}]", row.join(", "));
    }
}

/// Builds the full report. `timing` adds wall-clock time, which makes the
/// output run-dependent.
pub fn build_report(inst: &ProblemInstance, opts: VerifyOptions, timing: bool) -> Report {
    let start = Instant::now();
    let echo = InstanceEcho {
        dim: inst.dim(),
        h_basis: inst.h().vectors().iter().map(|v| strings(v)).collect(),
        gm_basis: inst.gm_generators().iter().map(|v| strings(v)).collect(),
        mu: strings(inst.mu().coords()),
        inner_product: grid(inst.ip().form().gram()),
        slice_dim: inst.slice().dim(),
    };
    let rep = verify_instance(inst, opts);
    let mut report = Report {
        report_version: REPORT_VERSION,
        instance: echo,
        model_dim: 0,
        dims: Vec::new(),
        chain: Vec::new(),
        decomposition_g: None,
        decomposition_h: None,
        checks: checks(&rep),
        timing_ms: None,
    };
    let Ok(chain) = build_chain(inst) else {
        return finish(report, start, timing);
    };
    report.chain = chain.named().into_iter().map(|(n, s)| space(n, s)).collect();
    let d = chain.dim_formulas(inst.slice().dim());
    let mut dims = vec![("g", inst.dim())];
    dims.extend(chain.named().into_iter().map(|(n, s)| (n, s.dim())));
    dims.extend([
        ("N1", d.n1),
        ("X_m", d.x_m),
        ("N1_tilde", d.n1_tilde),
        ("ker_dphi_G", d.ker_dphi_g),
        ("ker_dphi_H", d.ker_dphi_h),
        ("model", d.model_total),
    ]);
    report.dims = dims
        .into_iter()
        .map(|(name, dim)| DimEntry {
            name: name.to_string(),
            dim,
        })
        .collect();
    let Ok(model) = build_model(&chain, inst) else {
        return finish(report, start, timing);
    };
    report.model_dim = model.total_dim();
    let g = decompose_g(&model);
    report.decomposition_g = Some(DecompositionG {
        blocks: vec![space("T0", &g.t0), space("T1", &g.t1), space("N0", &g.n0), space("N1", &g.n1)],
        gram_t1: grid(&g.gram_t1),
        gram_n1: grid(&g.gram_n1),
    });
    if let Ok(h) = decompose_h(&model) {
        report.decomposition_h = Some(DecompositionH {
            blocks: vec![
                space("TH0", &h.th0),
                space("TH1", &h.th1),
                space("NH0", &h.nh0),
                space("N1_tilde", &h.nh1),
                space("s(G,H,mu).m", &h.s_block),
                space("b.m", &h.bm),
                space("Y_m", &h.ym),
                space("X_m", &h.xm_block),
                space("N1", &h.n1_block),
                space("Z_m", &h.zm),
                space("M", &h.m_set),
            ],
            slice_form: grid(slice_form(&h, &model).gram()),
        });
    }
    finish(report, start, timing)
}

fn finish(mut r: Report, start: Instant, timing: bool) -> Report {
    if timing {
        r.timing_ms = Some(start.elapsed().as_millis());
    }
    r
}

/// A report for an instance that failed before the chain could be built.
pub fn validation_only(rep: &CheckReport) -> Vec<CheckEntry> {
    checks(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use wittartin_core::catalog;

    #[test]
    fn json_round_trip() {
        let r = build_report(&catalog::so3xso3_diagonal(), VerifyOptions::default(), false);
        let back: Report = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn generic_dims_table() {
        let r = build_report(&catalog::so3_generic(0), VerifyOptions::default(), false);
        assert_eq!(r.dim("s(G,H,mu)"), Some(0));
        assert_eq!(r.dim("b"), Some(1));
        assert_eq!(r.dim("X_m"), Some(2));
        assert!(r.all_passed());
        assert!(r.to_text().contains("h_perp_mu"));
    }

    #[test]
    fn timing_is_opt_in() {
        let r = build_report(&catalog::so3_zero(0), VerifyOptions::default(), false);
        assert!(r.timing_ms.is_none());
        assert!(!r.to_json().contains("timing"));
        let r = build_report(&catalog::so3_zero(0), VerifyOptions::default(), true);
        assert!(r.timing_ms.is_some());
    }
}
