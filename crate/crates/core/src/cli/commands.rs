use std::f64::consts::PI;

use serde_json::{json, Map, Value};

use super::grid::{Grid, Spacing};
use super::output::{json_float, json_floats, Cell, Report, Summary};
use super::{CliError, CommandKind, JobSpec};
use crate::determinants::{hankel_det, modified_moments, quadrature_moments, MomentFamily};
use crate::error::QError;
use crate::families::{
    asc_poly, aw_poly, cdqh_poly, gram_matrix, little_qjacobi, little_qlaguerre, Basis, Family,
    FamilyBasis, PolyRep,
};
use crate::multifam::{
    m_asc_poly, m_asc_transform, m_aw_poly, m_aw_transform, m_cdqh_poly, m_cdqh_transform,
    m_little_qjacobi, m_little_qlaguerre, phi_form_check, rodrigues_oracle,
    verify_multiple_orthogonality, MultiFamily, MultiIndex, ParamVector,
};
use crate::qcore::{dd::compensated_sum, QContext};
use crate::transforms::{apply_exact, apply_series, plancherel_check, TransformSpec};
use crate::weights::{weight_ratio_analysis, EvalPoint};

type CliResult<T> = Result<T, CliError>;

pub const MULTI_FAMILY_NAMES: [&str; 5] = ["m_little_qlaguerre", "m_little_qjacobi", "m_asc", "m_cdqh", "m_aw"];

pub const SUITES: [&str; 5] = ["transform-image", "plancherel", "rodrigues", "reduction-chain", "phi-form"];

/// A multiple orthogonality condition at `ℓ = n_j` must stay above this.
const SHARPNESS_FLOOR: f64 = 1e-4;

const DEFAULT_EVAL_GRID: Grid = Grid::new(Spacing::Chebyshev, 21);
const DEFAULT_CHECK_GRID: Grid = Grid::new(Spacing::Chebyshev, 20);
const DEFAULT_LATTICE_GRID: Grid = Grid::new(Spacing::QLattice, 10);
const DEFAULT_GRAM_N: usize = 5;
const DEFAULT_IMAGE_N: usize = 6;
const DEFAULT_PLANCHEREL_N: usize = 3;
const DEFAULT_MOMENTS_N: usize = 5;

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

/// Family, parameters and multi-index a suite runs on when `--family` is absent.
fn suite_default(suite: &str) -> (&'static str, Vec<f64>, Option<Vec<usize>>) {
    match suite {
        "transform-image" => ("asc", vec![0.3, 0.2], None),
        "plancherel" => ("aw", vec![0.3, 0.2, 0.1, 0.4], None),
        "reduction-chain" => ("m_aw", vec![0.4, 0.3, 0.2, 0.1, 0.15], Some(vec![2, 1])),
        _ => ("m_little_qjacobi", vec![0.4, 0.3, 0.2], Some(vec![2, 1])),
    }
}

#[derive(Debug, Clone)]
enum Target {
    Classical(Family),
    Multi {
        family: MultiFamily,
        nvec: MultiIndex,
        av: ParamVector,
    },
}

impl Target {
    fn build(name: &str, params: &[f64], nvec: Option<&[usize]>, ctx: &QContext) -> CliResult<Self> {
        let shared = match name {
            "m_little_qlaguerre" => 0,
            "m_little_qjacobi" | "m_asc" => 1,
            "m_cdqh" => 2,
            "m_aw" => 3,
            _ => {
                if nvec.is_some() {
                    return usage(format!("--nvec applies only to the multiple families, not {name}"));
                }
                return Ok(Target::Classical(Family::from_name(name, params)?));
            }
        };
        let Some(nvec) = nvec else {
            return usage(format!("{name} needs --nvec"));
        };
        let r = nvec.len();
        if params.len() != r + shared {
            return usage(format!(
                "{name} with {r} indices takes {} parameters (a_1..a_{r} then {shared} shared), got {}",
                r + shared,
                params.len()
            ));
        }
        let av = ParamVector::new(&params[..r], ctx)?;
        let s = &params[r..];
        let family = match name {
            "m_little_qlaguerre" => MultiFamily::LittleQLaguerre,
            "m_little_qjacobi" => MultiFamily::LittleQJacobi { b: s[0] },
            "m_asc" => MultiFamily::Asc { b: s[0] },
            "m_cdqh" => MultiFamily::Cdqh { b: s[0], c: s[1] },
            _ => MultiFamily::Aw { b: s[0], c: s[1], d: s[2] },
        };
        Ok(Target::Multi {
            family,
            nvec: MultiIndex::new(nvec.to_vec())?,
            av,
        })
    }

    /// The polynomial itself, when the family has an explicit representation.
    fn polynomial(&self, n: Option<usize>, ctx: &QContext) -> CliResult<Option<PolyRep>> {
        match self {
            Target::Multi { family, nvec, av } => Ok(Some(family.polynomial(nvec, av, ctx)?)),
            Target::Classical(f) => {
                let n = require_n(n, f.name())?;
                Ok(f.polynomial(n, ctx).transpose()?)
            }
        }
    }
}

fn require_n(n: Option<usize>, name: &str) -> CliResult<usize> {
    n.ok_or_else(|| CliError::Usage(format!("{name} needs the degree --n")))
}

fn job_target(job: &JobSpec) -> CliResult<(String, Vec<f64>, Target)> {
    let Some(name) = job.family.clone() else {
        return usage(format!("{} needs --family", job.command.name()));
    };
    let params = job.params.clone().unwrap_or_default();
    let target = Target::build(&name, &params, job.nvec.as_deref(), &job.ctx)?;
    Ok((name, params, target))
}

fn negative_warnings(params: &[f64]) -> Vec<Value> {
    params
        .iter()
        .enumerate()
        .filter(|(_, &v)| v < 0.0)
        .map(|(i, _)| json!(format!("parameter {} is negative; the measure may be signed", i + 1)))
        .collect()
}

fn describe_family(name: &str, params: &[f64], nvec: Option<&[usize]>) -> Value {
    let mut m = Map::new();
    m.insert("family".into(), json!(name));
    m.insert("params".into(), json_floats(params));
    if let Some(nv) = nvec {
        m.insert("nvec".into(), json!(nv));
    }
    let warnings = negative_warnings(params);
    if !warnings.is_empty() {
        m.insert("warnings".into(), Value::Array(warnings));
    }
    Value::Object(m)
}

fn base_meta(job: &JobSpec, report: &mut Report) {
    let ctx = &job.ctx;
    let m = &mut report.meta;
    m.insert("q".into(), json_float(ctx.q()));
    m.insert("precision".into(), json!(format!("{:?}", ctx.precision).to_lowercase()));
    m.insert("eps_trunc".into(), json_float(ctx.eps_trunc));
    m.insert("quad_tol".into(), json_float(ctx.quad_tol));
    m.insert("ortho_tol".into(), json_float(ctx.ortho_tol));
}

fn family_meta(report: &mut Report, name: &str, params: &[f64], nvec: Option<&[usize]>) {
    if let Value::Object(fm) = describe_family(name, params, nvec) {
        report.meta.extend(fm);
    }
}

fn describe_basis(basis: &Basis) -> Value {
    match basis {
        Basis::Monomial => json!({ "kind": "monomial" }),
        Basis::Pochhammer { anchor, normalized_by } => json!({
            "kind": "pochhammer",
            "anchor": json_float(*anchor),
            "normalized_by": json_floats(normalized_by),
        }),
    }
}

/// Runs one job and returns its report.
pub fn run(job: &JobSpec) -> CliResult<Report> {
    match job.command {
        CommandKind::Eval => eval(job),
        CommandKind::Coeffs => coeffs(job),
        CommandKind::Gram => gram(job),
        CommandKind::Verify => verify(job),
        CommandKind::Moments => moments(job),
        CommandKind::Ratio => ratio(job),
    }
}

/// Values `p_n(x)` of a classical family from its basis (explicit or generating function).
fn classical_values(f: Family, n: usize, xs: &[f64], ctx: &QContext) -> CliResult<Vec<f64>> {
    if let Some(p) = f.polynomial(n, ctx) {
        let p = p?;
        return Ok(xs.iter().map(|&x| p.eval(x, ctx)).collect());
    }
    let basis = FamilyBasis::new(f, n, ctx)?;
    Ok(xs.iter().map(|&x| basis.values(x, ctx)[n]).collect())
}

fn eval(job: &JobSpec) -> CliResult<Report> {
    let ctx = &job.ctx;
    let (name, params, target) = job_target(job)?;
    let grid = job.grid.unwrap_or(DEFAULT_EVAL_GRID);
    let xs = grid.points(ctx.q());
    let values = match &target {
        Target::Classical(f) => classical_values(*f, require_n(job.n, &name)?, &xs, ctx)?,
        Target::Multi { .. } => {
            let p = target.polynomial(None, ctx)?.expect("multiple families are explicit");
            xs.iter().map(|&x| p.eval(x, ctx)).collect()
        }
    };
    let mut report = Report::new("eval", &["x", "value"]);
    base_meta(job, &mut report);
    family_meta(&mut report, &name, &params, job.nvec.as_deref());
    report.meta.insert("grid".into(), json!(grid.to_string()));
    if let Target::Classical(_) = target {
        report.meta.insert("n".into(), json!(job.n));
    }
    for (&x, &v) in xs.iter().zip(&values) {
        report.push(vec![x.into(), v.into()]);
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(CliError::Numerical("non-finite polynomial value".into()));
    }
    Ok(report)
}

/// Monomial coefficients of a degree-`n` polynomial known only through values,
/// by interpolation at the `n + 1` Chebyshev nodes.
pub(crate) fn chebyshev_fit<F: Fn(f64) -> f64>(n: usize, f: F) -> Vec<f64> {
    let m = n + 1;
    let node = |i: usize| PI * (i as f64 + 0.5) / m as f64;
    let vals: Vec<f64> = (0..m).map(|i| f(node(i).cos())).collect();
    let mut out = vec![0.0; m];
    let mut t_prev = vec![0.0; m];
    let mut t_cur = vec![0.0; m];
    t_cur[0] = 1.0;
    for j in 0..m {
        let weight = if j == 0 { 1.0 } else { 2.0 } / m as f64;
        let cj = weight * compensated_sum((0..m).map(|i| vals[i] * (j as f64 * node(i)).cos()));
        for (o, t) in out.iter_mut().zip(&t_cur) {
            *o += cj * t;
        }
        // T_{j+1} = 2x T_j - T_{j-1}, with T_1 = x
        let mut next = vec![0.0; m];
        for k in 0..m - 1 {
            next[k + 1] += if j == 0 { 1.0 } else { 2.0 } * t_cur[k];
        }
        if j > 0 {
            for (nx, p) in next.iter_mut().zip(&t_prev) {
                *nx -= p;
            }
        }
        t_prev = std::mem::replace(&mut t_cur, next);
    }
    out
}

fn coeffs(job: &JobSpec) -> CliResult<Report> {
    let ctx = &job.ctx;
    let (name, params, target) = job_target(job)?;
    let poly = match target.polynomial(job.n, ctx)? {
        Some(p) => p,
        None => {
            let Target::Classical(f) = target else { unreachable!() };
            let n = require_n(job.n, &name)?;
            let basis = FamilyBasis::new(f, n, ctx)?;
            PolyRep::monomial(chebyshev_fit(n, |x| basis.values(x, ctx)[n]))?
        }
    };
    let mono = poly.to_monomial(ctx);
    let mut report = Report::new("coeffs", &["k", "coefficient", "monomial"]);
    base_meta(job, &mut report);
    family_meta(&mut report, &name, &params, job.nvec.as_deref());
    report.meta.insert("basis".into(), describe_basis(poly.basis()));
    if let Target::Classical(_) = target {
        report.meta.insert("n".into(), json!(job.n));
    }
    for (k, (&c, &m)) in poly.coeffs().iter().zip(mono.coeffs()).enumerate() {
        report.push(vec![k.into(), c.into(), m.into()]);
    }
    Ok(report)
}

fn gram(job: &JobSpec) -> CliResult<Report> {
    let ctx = &job.ctx;
    let (name, params, target) = job_target(job)?;
    match target {
        Target::Classical(f) => {
            let n_max = job.n.unwrap_or(DEFAULT_GRAM_N);
            let g = gram_matrix(f, n_max, ctx)?;
            let mut cols = vec!["n".to_string()];
            cols.extend((0..=n_max).map(|m| format!("m{m}")));
            let col_refs: Vec<&str> = cols.iter().map(String::as_str).collect();
            let mut report = Report::new("gram", &col_refs);
            base_meta(job, &mut report);
            family_meta(&mut report, &name, &params, None);
            report.meta.insert("n".into(), json!(n_max));
            for (n, row) in g.entries.iter().enumerate() {
                let mut cells = vec![Cell::from(n)];
                cells.extend(row.iter().map(|&v| Cell::from(v)));
                report.push(cells);
            }
            report.summary = Summary::residual(g.max_offdiag_residual(), ctx.ortho_tol);
            Ok(report)
        }
        Target::Multi { family, nvec, av } => {
            let rep = verify_multiple_orthogonality(family, &nvec, &av, ctx)?;
            let mut report = Report::new("gram", &["j", "ell", "kind", "residual"]);
            base_meta(job, &mut report);
            family_meta(&mut report, &name, &params, Some(nvec.entries()));
            report.meta.insert("sharpness_floor".into(), json_float(SHARPNESS_FLOOR));
            for (kind, list) in [("condition", &rep.residuals), ("sharpness", &rep.sharpness)] {
                for c in list {
                    report.push(vec![(c.j + 1).into(), c.ell.into(), kind.into(), c.value.into()]);
                }
            }
            report.summary = Summary::residual(rep.max_residual(), ctx.ortho_tol);
            report.summary.pass &= rep.min_sharpness() > SHARPNESS_FLOOR;
            Ok(report)
        }
    }
}

/// One identity check.
struct Check {
    check: String,
    index: usize,
    x: Option<f64>,
    lhs: f64,
    rhs: f64,
}

impl Check {
    fn residual(&self) -> f64 {
        (self.lhs - self.rhs).abs() / self.rhs.abs().max(1.0)
    }
}

/// `T f` from the kernel series, which sees only values of `f`, against `target`.
fn series_pointwise(
    label: &str,
    t: &TransformSpec,
    f: &PolyRep,
    target: &PolyRep,
    xs: &[f64],
    ctx: &QContext,
    out: &mut Vec<Check>,
) -> CliResult<()> {
    for (i, &x) in xs.iter().enumerate() {
        let pt = EvalPoint::from_x(x)?;
        out.push(Check {
            check: label.to_string(),
            index: i,
            x: Some(x),
            lhs: apply_series(t, |y| f.eval(y, ctx), pt, ctx)?.value,
            rhs: target.eval(x, ctx),
        });
    }
    Ok(())
}

fn pointwise(label: &str, p: &PolyRep, target: &PolyRep, xs: &[f64], ctx: &QContext, out: &mut Vec<Check>) {
    for (i, &x) in xs.iter().enumerate() {
        out.push(Check {
            check: label.to_string(),
            index: i,
            x: Some(x),
            lhs: p.eval(x, ctx),
            rhs: target.eval(x, ctx),
        });
    }
}

fn unsupported<T>(suite: &str, name: &str) -> CliResult<T> {
    usage(format!("suite {suite} does not apply to family {name}"))
}

fn suite_transform_image(name: &str, t: &Target, n_max: usize, xs: &[f64], ctx: &QContext) -> CliResult<Vec<Check>> {
    let q = ctx.q();
    let mut out = Vec::new();
    match t {
        Target::Classical(Family::Asc { a, b }) => {
            let tr = TransformSpec::t_a(*a, ctx)?;
            for n in 0..=n_max {
                let little = little_qlaguerre(n, a * b / q, ctx)?;
                let target = asc_poly(n, *a, *b, ctx)?;
                pointwise(&format!("n={n},exact"), &apply_exact(&tr, &little)?, &target, xs, ctx, &mut out);
                series_pointwise(&format!("n={n},series"), &tr, &little, &target, xs, ctx, &mut out)?;
            }
        }
        Target::Classical(Family::Cdqh { a, b, c }) => {
            let tr = TransformSpec::t_ac(*a, *c, ctx)?;
            for n in 0..=n_max {
                let little = little_qlaguerre(n, a * b / q, ctx)?;
                let target = cdqh_poly(n, *a, *b, *c, ctx)?;
                pointwise(&format!("n={n},exact"), &apply_exact(&tr, &little)?, &target, xs, ctx, &mut out);
                series_pointwise(&format!("n={n},series"), &tr, &little, &target, xs, ctx, &mut out)?;
            }
        }
        Target::Classical(Family::Aw { a, b, c, d }) => {
            let tr = TransformSpec::t_acd(*a, *c, *d, ctx)?;
            for n in 0..=n_max {
                let little = little_qjacobi(n, a * b / q, c * d / q, ctx)?;
                let target = aw_poly(n, *a, *b, *c, *d, ctx)?;
                pointwise(&format!("n={n},exact"), &apply_exact(&tr, &little)?, &target, xs, ctx, &mut out);
                series_pointwise(&format!("n={n},series"), &tr, &little, &target, xs, ctx, &mut out)?;
            }
        }
        Target::Multi { family, nvec, av } => {
            let (img, target) = match *family {
                MultiFamily::Asc { b } => (m_asc_transform(nvec, av, b, ctx)?, m_asc_poly(nvec, av, b, ctx)?),
                MultiFamily::Cdqh { b, c } => {
                    (m_cdqh_transform(nvec, av, b, c, ctx)?, m_cdqh_poly(nvec, av, b, c, ctx)?)
                }
                MultiFamily::Aw { b, c, d } => {
                    (m_aw_transform(nvec, av, b, c, d, ctx)?, m_aw_poly(nvec, av, b, c, d, ctx)?)
                }
                _ => return unsupported("transform-image", name),
            };
            pointwise("transform-vs-sum", &img, &target, xs, ctx, &mut out);
        }
        _ => return unsupported("transform-image", name),
    }
    Ok(out)
}

fn suite_plancherel(name: &str, t: &Target, n_max: usize, ctx: &QContext) -> CliResult<Vec<Check>> {
    let (ta, tb) = match *t {
        Target::Classical(Family::Asc { a, b }) => (TransformSpec::t_a(a, ctx)?, TransformSpec::t_a(b, ctx)?),
        Target::Classical(Family::Cdqh { a, b, c }) => {
            (TransformSpec::t_ac(a, c, ctx)?, TransformSpec::t_ac(b, c, ctx)?)
        }
        Target::Classical(Family::Aw { a, b, c, d }) => {
            (TransformSpec::t_acd(a, c, d, ctx)?, TransformSpec::t_acd(b, c, d, ctx)?)
        }
        _ => return unsupported("plancherel", name),
    };
    let mono = |k: usize| {
        let mut c = vec![0.0; k + 1];
        c[k] = 1.0;
        PolyRep::monomial(c)
    };
    let mut out = Vec::new();
    for i in 0..=n_max {
        for j in i..=n_max {
            let p = plancherel_check(&ta, &tb, &mono(i)?, &mono(j)?, ctx)?;
            out.push(Check {
                check: format!("x^{i},x^{j}"),
                index: i * (n_max + 1) + j,
                x: None,
                lhs: p.lhs,
                rhs: p.rhs,
            });
        }
    }
    Ok(out)
}

fn little_parts<'a>(suite: &str, name: &str, t: &'a Target) -> CliResult<(&'a MultiIndex, &'a ParamVector, Option<f64>)> {
    match t {
        Target::Multi { family: MultiFamily::LittleQLaguerre, nvec, av } => Ok((nvec, av, None)),
        Target::Multi { family: MultiFamily::LittleQJacobi { b }, nvec, av } => Ok((nvec, av, Some(*b))),
        _ => unsupported(suite, name),
    }
}

fn suite_rodrigues(name: &str, t: &Target, xs: &[f64], ctx: &QContext) -> CliResult<Vec<Check>> {
    let (nvec, av, b) = little_parts("rodrigues", name, t)?;
    let p = match b {
        Some(b) => m_little_qjacobi(nvec, av, b, ctx)?,
        None => m_little_qlaguerre(nvec, av, ctx)?,
    };
    let mut out = Vec::new();
    for (i, &x) in xs.iter().enumerate() {
        if x <= 0.0 {
            return usage(format!("the rodrigues suite needs positive grid points, got {x}"));
        }
        let lhs = match rodrigues_oracle(nvec, av, b, x, ctx) {
            Ok(v) => v,
            // the operator form cannot be divided out at a zero of its prefactor
            Err(QError::EvaluationPoint { .. }) => continue,
            Err(e) => return Err(e.into()),
        };
        out.push(Check {
            check: "operator-vs-sum".into(),
            index: i,
            x: Some(x),
            lhs,
            rhs: p.eval(x, ctx),
        });
    }
    Ok(out)
}

fn suite_phi_form(name: &str, t: &Target, xs: &[f64], ctx: &QContext) -> CliResult<Vec<Check>> {
    let (nvec, av, b) = little_parts("phi-form", name, t)?;
    let mut out = Vec::new();
    for (i, &x) in xs.iter().enumerate() {
        let f = phi_form_check(nvec, av, b.unwrap_or(0.0), x, ctx)?;
        out.push(Check {
            check: "sum-vs-series".into(),
            index: i,
            x: Some(x),
            lhs: f.lhs,
            rhs: f.rhs,
        });
    }
    Ok(out)
}

fn suite_reduction_chain(name: &str, t: &Target, n_max: usize, xs: &[f64], ctx: &QContext) -> CliResult<Vec<Check>> {
    let mut out = Vec::new();
    let transform_chain = |anchor: f64, degree: usize, out: &mut Vec<Check>| -> CliResult<()> {
        let full = TransformSpec::t_acd(anchor, 0.0, 0.0, ctx)?;
        let bare = TransformSpec::t_a(anchor, ctx)?;
        for k in 0..=degree {
            let mut c = vec![0.0; k + 1];
            c[k] = 1.0;
            let f = PolyRep::monomial(c)?;
            let label = format!("T(c=d=0)=T,x^{k}");
            pointwise(&label, &apply_exact(&full, &f)?, &apply_exact(&bare, &f)?, xs, ctx, out);
        }
        Ok(())
    };
    match *t {
        Target::Classical(Family::Aw { a, b, c, .. }) => {
            for n in 0..=n_max {
                let aw_d0 = aw_poly(n, a, b, c, 0.0, ctx)?;
                pointwise(&format!("aw(d=0)=cdqh,n={n}"), &aw_d0, &cdqh_poly(n, a, b, c, ctx)?, xs, ctx, &mut out);
                let aw_cd0 = aw_poly(n, a, b, 0.0, 0.0, ctx)?;
                pointwise(&format!("aw(c=d=0)=asc,n={n}"), &aw_cd0, &asc_poly(n, a, b, ctx)?, xs, ctx, &mut out);
                let jac = little_qjacobi(n, a, 0.0, ctx)?;
                let label = format!("little_qjacobi(b=0)=little_qlaguerre,n={n}");
                pointwise(&label, &jac, &little_qlaguerre(n, a, ctx)?, xs, ctx, &mut out);
            }
            transform_chain(a, n_max, &mut out)?;
        }
        Target::Multi { family: MultiFamily::Aw { b, c, .. }, ref nvec, ref av } => {
            let aw_d0 = m_aw_poly(nvec, av, b, c, 0.0, ctx)?;
            pointwise("m_aw(d=0)=m_cdqh", &aw_d0, &m_cdqh_poly(nvec, av, b, c, ctx)?, xs, ctx, &mut out);
            let aw_cd0 = m_aw_poly(nvec, av, b, 0.0, 0.0, ctx)?;
            pointwise("m_aw(c=d=0)=m_asc", &aw_cd0, &m_asc_poly(nvec, av, b, ctx)?, xs, ctx, &mut out);
            let jac = m_little_qjacobi(nvec, av, 0.0, ctx)?;
            let lag = m_little_qlaguerre(nvec, av, ctx)?;
            pointwise("m_little_qjacobi(b=0)=m_little_qlaguerre", &jac, &lag, xs, ctx, &mut out);
            transform_chain(b, nvec.size(), &mut out)?;
        }
        _ => return unsupported("reduction-chain", name),
    }
    Ok(out)
}

fn verify(job: &JobSpec) -> CliResult<Report> {
    let ctx = &job.ctx;
    let Some(suite) = job.suite.as_deref() else {
        return usage(format!("verify needs --suite ({} or all)", SUITES.join("|")));
    };
    let suites: Vec<&str> = match suite {
        "all" => {
            if job.family.is_some() || job.params.is_some() || job.nvec.is_some() {
                return usage("--suite all runs each suite on its default family; drop --family/--params/--nvec");
            }
            SUITES.to_vec()
        }
        s if SUITES.contains(&s) => vec![s],
        s => return usage(format!("unknown suite '{s}' ({} or all)", SUITES.join("|"))),
    };
    let mut report = Report::new("verify", &["suite", "check", "index", "x", "lhs", "rhs", "residual"]);
    base_meta(job, &mut report);
    report.meta.insert("suite".into(), json!(suite));
    let mut families = Map::new();
    let mut max_residual = 0.0f64;
    for s in suites {
        let (name, params, nvec) = match &job.family {
            Some(f) => (f.clone(), job.params.clone().unwrap_or_default(), job.nvec.clone()),
            None => {
                if job.params.is_some() || job.nvec.is_some() {
                    return usage("--params/--nvec need --family");
                }
                let (f, p, n) = suite_default(s);
                (f.to_string(), p, n)
            }
        };
        let target = Target::build(&name, &params, nvec.as_deref(), ctx)?;
        let lattice = job.grid.unwrap_or(DEFAULT_LATTICE_GRID).points(ctx.q());
        let cheb = job.grid.unwrap_or(DEFAULT_CHECK_GRID).points(ctx.q());
        let checks = match s {
            "transform-image" => suite_transform_image(&name, &target, job.n.unwrap_or(DEFAULT_IMAGE_N), &cheb, ctx)?,
            "plancherel" => suite_plancherel(&name, &target, job.n.unwrap_or(DEFAULT_PLANCHEREL_N), ctx)?,
            "rodrigues" => suite_rodrigues(&name, &target, &lattice, ctx)?,
            "reduction-chain" => suite_reduction_chain(&name, &target, job.n.unwrap_or(DEFAULT_IMAGE_N), &cheb, ctx)?,
            _ => suite_phi_form(&name, &target, &lattice, ctx)?,
        };
        if checks.is_empty() {
            return Err(CliError::Numerical(format!("suite {s} produced no checks")));
        }
        families.insert(s.to_string(), describe_family(&name, &params, nvec.as_deref()));
        for c in checks {
            let r = c.residual();
            max_residual = if r.is_nan() { f64::NAN } else { max_residual.max(r) };
            report.push(vec![
                s.into(),
                c.check.into(),
                c.index.into(),
                c.x.map_or(Cell::Text("-".into()), Cell::Num),
                c.lhs.into(),
                c.rhs.into(),
                r.into(),
            ]);
        }
    }
    report.meta.insert("families".into(), Value::Object(families));
    report.summary = Summary::residual(max_residual, ctx.ortho_tol);
    Ok(report)
}

fn moments(job: &JobSpec) -> CliResult<Report> {
    let ctx = &job.ctx;
    let (name, params, _) = job_target(job)?;
    let family = match name.as_str() {
        "asc" => MomentFamily::Asc,
        "cdqh" => MomentFamily::Cdqh,
        "aw" => MomentFamily::Aw,
        _ => return usage(format!("moment tables exist for asc, cdqh and aw, not {name}")),
    };
    let n = job.n.unwrap_or(DEFAULT_MOMENTS_N);
    let closed = modified_moments(family, &params, n, n, ctx)?;
    let quad = quadrature_moments(family, &params, n, n, ctx)?;
    let mut report = Report::new("moments", &["k", "j", "closed_form", "quadrature", "deviation"]);
    base_meta(job, &mut report);
    family_meta(&mut report, &name, &params, None);
    report.meta.insert("n".into(), json!(n));
    let dets: Vec<f64> = (1..=n + 1).map_while(|m| hankel_det(&closed, m).ok()).collect();
    report.meta.insert("determinants".into(), json_floats(&dets));
    for k in 0..=n {
        for j in 0..=n {
            let (c, qd) = (closed.get(k, j), quad.get(k, j));
            report.push(vec![k.into(), j.into(), c.into(), qd.into(), ((c - qd).abs() / c.abs()).into()]);
        }
    }
    report.summary = Summary::residual(quad.max_relative_deviation(&closed), ctx.ortho_tol);
    Ok(report)
}

fn ratio(job: &JobSpec) -> CliResult<Report> {
    let ctx = &job.ctx;
    let params = job.params.clone().unwrap_or_default();
    let [a1, a2] = params[..] else {
        return usage("ratio takes --params a1,a2");
    };
    let list = weight_ratio_analysis(a1, a2, ctx)?;
    let mut report = Report::new("ratio", &["k", "pole", "zero"]);
    base_meta(job, &mut report);
    report.meta.insert("params".into(), json_floats(&params));
    for (k, pz) in list.iter().enumerate() {
        report.push(vec![k.into(), pz.pole.into(), pz.zero.into()]);
    }
    Ok(report)
}
