//! Machine-readable report document with deterministic serialization:
//! keys are emitted in sorted order and every float is printed with 17
//! significant digits, so identical inputs produce byte-identical reports.

use stromcheck_core::hermitian::Classification;
use stromcheck_core::strominger::{AlphaStatus, SystemReport};

/// Version of the machine report layout; bump on breaking changes.
pub const REPORT_SCHEMA_VERSION: &str = "1";

#[derive(Clone, Debug)]
pub struct ReportDocument {
    pub schema_version: String,
    pub tool_version: String,
    pub model: String,
    pub dimension: usize,
    pub tolerances: Tolerances,
    pub structure: StructureSection,
    pub classification: Option<ClassificationSection>,
    pub omega: Option<OmegaSection>,
    pub dilatino: Option<(f64, f64)>,
    pub strominger: Option<StromingerSection>,
    /// exit criterion: every requested flag passed
    pub pass: bool,
}

#[derive(Clone, Debug)]
pub struct Tolerances {
    pub pass_tol: f64,
    pub struct_tol: f64,
    pub prune_eps: f64,
}

#[derive(Clone, Debug)]
pub struct StructureSection {
    pub jacobi_residual: f64,
    pub d_squared_residual: f64,
    pub nijenhuis_residual: f64,
    pub metric_compat_residual: f64,
    pub unimodular: bool,
    pub adjoint_traces: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct ClassificationSection {
    pub class: Classification,
    pub lee_coefficients: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct OmegaSection {
    pub type_residual: f64,
    pub closed_residual: f64,
    pub norm: f64,
}

#[derive(Clone, Debug)]
pub struct StromingerSection {
    pub report: SystemReport,
    pub nabla_name: String,
    pub a_name: String,
    pub a_unitarity: f64,
}

fn fmt_f64(x: f64) -> String {
    if x == 0.0 {
        // normalize the sign of zero so reports are byte-stable
        return "0.0000000000000000e0".into();
    }
    format!("{x:.16e}")
}

/// Minimal deterministic JSON writer: objects keep the insertion order of
/// `field`, which this module always calls in sorted key order.
struct JsonObj {
    buf: String,
    first: bool,
}

impl JsonObj {
    fn new() -> Self {
        JsonObj {
            buf: String::from("{"),
            first: true,
        }
    }

    fn raw(&mut self, key: &str, value: &str) {
        if !self.first {
            self.buf.push(',');
        }
        self.first = false;
        self.buf.push('"');
        self.buf.push_str(key);
        self.buf.push_str("\":");
        self.buf.push_str(value);
    }

    fn str(&mut self, key: &str, value: &str) {
        self.raw(key, &format!("\"{}\"", value.replace('"', "\\\"")));
    }

    fn num(&mut self, key: &str, value: f64) {
        self.raw(key, &fmt_f64(value));
    }

    fn int(&mut self, key: &str, value: usize) {
        self.raw(key, &value.to_string());
    }

    fn bool(&mut self, key: &str, value: bool) {
        self.raw(key, if value { "true" } else { "false" });
    }

    fn arr(&mut self, key: &str, values: &[f64]) {
        let inner: Vec<String> = values.iter().map(|&v| fmt_f64(v)).collect();
        self.raw(key, &format!("[{}]", inner.join(",")));
    }

    fn finish(mut self) -> String {
        self.buf.push('}');
        self.buf
    }
}

fn alpha_status_str(s: AlphaStatus) -> &'static str {
    match s {
        AlphaStatus::Given => "given",
        AlphaStatus::Fitted => "fitted",
        AlphaStatus::Degenerate => "degenerate",
        AlphaStatus::NoSolution => "no_solution",
    }
}

impl ReportDocument {
    /// Deterministic machine rendering (JSON, sorted keys, 17 significant
    /// digits).
    pub fn to_machine(&self) -> String {
        let mut root = JsonObj::new();
        if let Some(c) = &self.classification {
            let mut o = JsonObj::new();
            o.bool("balanced", c.class.balanced);
            o.num("balanced_residual", c.class.balanced_residual);
            o.num("d_omega_residual", c.class.d_omega_residual);
            o.bool("gauduchon", c.class.gauduchon);
            o.num("gauduchon_residual", c.class.gauduchon_residual);
            o.bool("kahler", c.class.kahler);
            o.arr("lee_coefficients", &c.lee_coefficients);
            o.num("lee_costar_norm", c.class.lee_costar_norm);
            o.num("lee_norm", c.class.lee_norm);
            root.raw("classification", &o.finish());
        }
        if let Some((r1, r2)) = self.dilatino {
            let mut o = JsonObj::new();
            o.num("conformally_balanced_residual", r2);
            o.num("costar_omega_residual", r1);
            root.raw("dilatino", &o.finish());
        }
        root.int("dimension", self.dimension);
        root.str("model", &self.model);
        if let Some(om) = &self.omega {
            let mut o = JsonObj::new();
            o.num("closed_residual", om.closed_residual);
            o.num("norm", om.norm);
            o.num("type_residual", om.type_residual);
            root.raw("omega", &o.finish());
        }
        root.bool("pass", self.pass);
        root.str("schema_version", &self.schema_version);
        if let Some(s) = &self.strominger {
            let mut o = JsonObj::new();
            o.str("a", &s.a_name);
            o.num("a_unitarity_residual", s.a_unitarity);
            o.num("alpha_used", s.report.alpha_used);
            o.str("alpha_status", alpha_status_str(s.report.alpha_status));
            o.num("bianchi_residual", s.report.bianchi);
            o.num("conformally_balanced_residual", s.report.conf_balanced);
            o.num("dilatino_residual", s.report.dilatino);
            let mut flags = JsonObj::new();
            flags.bool("all_pass", s.report.flags.all_pass);
            flags.bool("bianchi", s.report.flags.bianchi);
            flags.bool("conf_balanced", s.report.flags.conf_balanced);
            flags.bool("hym_a", s.report.flags.hym_a);
            flags.bool("hym_nabla", s.report.flags.hym_nabla);
            o.raw("flags", &flags.finish());
            o.arr("hym_a", &[s.report.hym_a.0, s.report.hym_a.1]);
            o.arr("hym_nabla", &[s.report.hym_nabla.0, s.report.hym_nabla.1]);
            o.str("nabla", &s.nabla_name);
            o.num("nabla_unitarity_residual", s.report.nabla_unitarity);
            o.num("omega_closed_residual", s.report.omega_closed);
            o.num("omega_norm", s.report.omega_norm);
            o.bool("strict_hym_nabla", s.report.strict_hym_nabla);
            root.raw("strominger", &o.finish());
        }
        {
            let mut o = JsonObj::new();
            o.arr("adjoint_traces", &self.structure.adjoint_traces);
            o.num("d_squared_residual", self.structure.d_squared_residual);
            o.num("jacobi_residual", self.structure.jacobi_residual);
            o.num("metric_compat_residual", self.structure.metric_compat_residual);
            o.num("nijenhuis_residual", self.structure.nijenhuis_residual);
            o.bool("unimodular", self.structure.unimodular);
            root.raw("structure", &o.finish());
        }
        {
            let mut o = JsonObj::new();
            o.num("pass_tol", self.tolerances.pass_tol);
            o.num("prune_eps", self.tolerances.prune_eps);
            o.num("struct_tol", self.tolerances.struct_tol);
            root.raw("tolerances", &o.finish());
        }
        root.str("tool_version", &self.tool_version);
        root.finish()
    }

    /// Human-readable rendering.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let flag = |b: bool| if b { "yes" } else { "no " };
        out.push_str(&format!(
            "model {} (dimension {}), tolerance {:.1e}\n",
            self.model, self.dimension, self.tolerances.pass_tol
        ));
        out.push_str(&format!(
            "structure: jacobi {:.2e}  d² {:.2e}  nijenhuis {:.2e}  unimodular {}\n",
            self.structure.jacobi_residual,
            self.structure.d_squared_residual,
            self.structure.nijenhuis_residual,
            flag(self.structure.unimodular),
        ));
        if let Some(c) = &self.classification {
            out.push_str(&format!(
                "classification: kahler {}  balanced {}  gauduchon {}\n",
                flag(c.class.kahler),
                flag(c.class.balanced),
                flag(c.class.gauduchon)
            ));
            out.push_str(&format!(
                "  residuals: |dω| {:.2e}  |dω^(n-1)| {:.2e}  |dd^c ω^(n-1)| {:.2e}\n",
                c.class.d_omega_residual, c.class.balanced_residual, c.class.gauduchon_residual
            ));
            out.push_str(&format!(
                "  lee form: |θ| {:.2e}  |d*θ| {:.2e}  coefficients {:?}\n",
                c.class.lee_norm, c.class.lee_costar_norm, c.lee_coefficients
            ));
        }
        if let Some(om) = &self.omega {
            out.push_str(&format!(
                "volume form: ‖Ω‖ {:.12}  |dΩ| {:.2e}  type residual {:.2e}\n",
                om.norm, om.closed_residual, om.type_residual
            ));
        }
        if let Some((r1, r2)) = self.dilatino {
            out.push_str(&format!(
                "dilatino: |d*ω - d^c log‖Ω‖| {r1:.2e}  |d(‖Ω‖ω^(n-1))| {r2:.2e}\n"
            ));
        }
        if let Some(s) = &self.strominger {
            let r = &s.report;
            out.push_str(&format!(
                "strominger system (∇ = {}, A = {}):\n",
                s.nabla_name, s.a_name
            ));
            out.push_str(&format!(
                "  hym A:        ({:.2e}, {:.2e})   pass {}\n",
                r.hym_a.0,
                r.hym_a.1,
                flag(r.flags.hym_a)
            ));
            out.push_str(&format!(
                "  hym ∇:        ({:.2e}, {:.2e})   pass {}{}\n",
                r.hym_nabla.0,
                r.hym_nabla.1,
                flag(r.flags.hym_nabla),
                if r.strict_hym_nabla {
                    ""
                } else {
                    "  (informational)"
                }
            ));
            out.push_str(&format!(
                "  conf-balanced: {:.2e}            pass {}\n",
                r.conf_balanced,
                flag(r.flags.conf_balanced)
            ));
            out.push_str(&format!(
                "  bianchi:       {:.2e}            pass {}   (α = {:.12}, {})\n",
                r.bianchi,
                flag(r.flags.bianchi),
                r.alpha_used,
                alpha_status_str(r.alpha_status)
            ));
            out.push_str(&format!("  system: {}\n", flag(r.flags.all_pass)));
        }
        out.push_str(&format!("overall: {}\n", if self.pass { "PASS" } else { "FAIL" }));
        out
    }
}
