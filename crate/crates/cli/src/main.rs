//! Command-line surface over the weighted-shift library: parse a shift
//! specification, run a certification or construction, and print a
//! machine-readable report.
//!
//! Exit status: 0 for success / certified pass, 1 for a certified failure
//! (a witness is reported), 2 for usage or domain errors.

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use midshift::certify::{
    certify_che, certify_k_hyponormal, certify_mid, certify_n_contractive, diagram_check,
    flatness_rigidity_check, Certificate,
};
use midshift::completion::{
    agler_subshift_completion_with_cap, che_three_weight_test, gap_ratio, gap_ratio_from_mnd,
    gap_ratio_from_pq, stampfli_completion, trivial_completion, DEFAULT_M_CAP,
};
use midshift::shift_model::{moments, WeightedShift};
use midshift::transforms::{
    agler_preimage, agler_preimage_alpha0_exact, aluthge, inverse_aluthge, Alpha0Source,
};

use midshift_cli::build::{build_shift, force_float, parse_scalar_flag, CliError, CliResult};
use midshift_cli::parser;
use midshift_cli::report::{fmt_scalar, Format, Report};

/// Environment variable overriding the Agler-index search cap of
/// `complete2-agler`.
const M_CAP_ENV: &str = "MIDSHIFT_M_CAP";

#[derive(Parser)]
#[command(
    name = "midshift",
    version,
    about = "Certification and constructions for unilateral weighted shifts"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "structured")]
    format: Format,
    /// Evaluate the shift's weights in floating point.
    #[arg(long, global = true)]
    float: bool,
    /// Keep exact arithmetic wherever the data allows (default).
    #[arg(long, global = true, conflicts_with = "float")]
    exact: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the leading weights of a shift
    Weights {
        spec: String,
        #[arg(long, default_value_t = 12)]
        count: usize,
    },
    /// Print the leading moments of a shift
    Moments {
        spec: String,
        #[arg(long, default_value_t = 12)]
        count: usize,
    },
    /// Certify moment infinite divisibility at finite order
    #[command(name = "certify-mid")]
    CertifyMid {
        spec: String,
        #[arg(long, default_value_t = 8)]
        order: usize,
        #[arg(long, default_value_t = 40)]
        range: usize,
    },
    /// Certify k-hyponormality through Hankel matrix positivity
    #[command(name = "certify-khypo")]
    CertifyKhypo {
        spec: String,
        #[arg(long, default_value_t = 2)]
        khypo: usize,
        #[arg(long, default_value_t = 40)]
        nmax: usize,
    },
    /// Certify n-contractivity of the moment sequence
    #[command(name = "certify-contractive")]
    CertifyContractive {
        spec: String,
        #[arg(long, default_value_t = 8)]
        order: usize,
        #[arg(long, default_value_t = 40)]
        range: usize,
    },
    /// Certify complete hyperexpansivity at finite order
    #[command(name = "certify-che")]
    CertifyChe {
        spec: String,
        #[arg(long, default_value_t = 8)]
        order: usize,
        #[arg(long, default_value_t = 40)]
        range: usize,
    },
    /// Run the four related sweeps and check their implications
    Diagram {
        spec: String,
        #[arg(long, default_value_t = 8)]
        order: usize,
        #[arg(long, default_value_t = 40)]
        range: usize,
    },
    /// Weights of the Aluthge transform
    Aluthge {
        spec: String,
        #[arg(long, default_value_t = 12)]
        count: usize,
    },
    /// Invert the Aluthge transform (automatic leading weight by default)
    #[command(name = "aluthge-inv")]
    AluthgeInv {
        spec: String,
        #[arg(long)]
        alpha0: Option<String>,
        #[arg(long, default_value_t = 12)]
        count: usize,
    },
    /// Closed-form pre-image of the k-th Agler shift
    #[command(name = "agler-preimage")]
    AglerPreimage {
        #[arg(long)]
        k: u64,
        #[arg(long, default_value_t = 12)]
        count: usize,
    },
    /// Weights of the spacing-N quotient shift
    Quotient {
        spec: String,
        #[arg(long, default_value_t = 1)]
        spacing: usize,
        #[arg(long, default_value_t = 12)]
        count: usize,
    },
    /// Weights of a linear subshift
    Subshift {
        spec: String,
        #[arg(long)]
        stride: usize,
        #[arg(long, default_value_t = 0)]
        offset: usize,
        #[arg(long, default_value_t = 12)]
        count: usize,
    },
    /// Flat completion of two squared weights through a two-atomic measure
    #[command(name = "complete2-trivial")]
    Complete2Trivial {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long, default_value_t = 12)]
        count: usize,
    },
    /// Non-flat completion of two squared weights through an Agler subshift
    #[command(name = "complete2-agler")]
    Complete2Agler {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long, default_value_t = 1e-3)]
        eps: f64,
    },
    /// Sufficient three-weight completion test
    #[command(name = "complete3-che")]
    Complete3Che {
        #[arg(long)]
        a0: String,
        #[arg(long)]
        a1: String,
        #[arg(long)]
        a2: String,
    },
    /// Canonical completion of three increasing weights
    Stampfli {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        c: String,
        #[arg(long, default_value_t = 12)]
        count: usize,
    },
    /// Scan for vanishing log differences and cross with flatness
    Flatness {
        spec: String,
        #[arg(long, default_value_t = 8)]
        order: usize,
        #[arg(long, default_value_t = 30)]
        range: usize,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Gap data of an Agler subshift
    #[command(name = "gap-ratio")]
    GapRatio {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        delta: usize,
    },
    /// Pre-image leading weights of the Agler shifts, closed form vs numeric
    #[command(name = "table-prop417")]
    TableProp417 {
        /// Range of Agler indices, e.g. 2..14 (inclusive)
        #[arg(long, default_value = "2..14")]
        k: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((report, code)) => {
            print!("{}", report.render(cli.format));
            code
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn shift_from_arg(cli: &Cli, text: &str) -> CliResult<WeightedShift> {
    let spec = parser::parse_shift_spec(text)?;
    let shift = build_shift(&spec)?;
    Ok(if cli.float { force_float(&shift) } else { shift })
}

fn push_bounds(r: &mut Report, order: usize, range: usize) {
    r.push("order", order.to_string());
    r.push("range", range.to_string());
}

fn push_certificate(r: &mut Report, cert: &Certificate) {
    r.push("claim", cert.claim.name());
    r.push("mode", cert.arithmetic_mode.name());
    r.push("verdict", cert.verdict.name());
    if let Some(w) = &cert.witness {
        r.push("witness", format!("n={} k={}", w.order, w.index));
        r.push("witness-value", fmt_scalar(&w.value));
    }
    for note in &cert.notes {
        r.push("note", note);
    }
}

fn weights_report(r: &mut Report, shift: &WeightedShift, count: usize) -> CliResult<()> {
    for n in 0..count {
        r.push(format!("w[{n}]"), fmt_scalar(&shift.weight(n)?));
    }
    Ok(())
}

fn certificate_exit(cert: &Certificate) -> ExitCode {
    if cert.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn run(cli: &Cli) -> CliResult<(Report, ExitCode)> {
    match &cli.command {
        Command::Weights { spec, count } => {
            let shift = shift_from_arg(cli, spec)?;
            let mut r = Report::new("weights");
            r.push("spec", spec);
            r.push("shift", shift.label());
            r.push("mode", shift.arithmetic_mode());
            weights_report(&mut r, &shift, *count)?;
            Ok((r, ExitCode::SUCCESS))
        }
        Command::Moments { spec, count } => {
            let shift = shift_from_arg(cli, spec)?;
            let mut r = Report::new("moments");
            r.push("spec", spec);
            r.push("shift", shift.label());
            r.push("mode", shift.arithmetic_mode());
            let g = moments(&shift);
            for n in 0..*count {
                r.push(format!("gamma[{n}]"), fmt_scalar(&g.gamma(n)?));
            }
            Ok((r, ExitCode::SUCCESS))
        }
        Command::CertifyMid { spec, order, range } => {
            let shift = shift_from_arg(cli, spec)?;
            let cert = certify_mid(&shift, *order, *range)?;
            let mut r = Report::new("certify-mid");
            r.push("spec", spec);
            r.push("shift", shift.label());
            push_bounds(&mut r, *order, *range);
            push_certificate(&mut r, &cert);
            let code = certificate_exit(&cert);
            Ok((r, code))
        }
        Command::CertifyKhypo { spec, khypo, nmax } => {
            let shift = shift_from_arg(cli, spec)?;
            let cert = certify_k_hyponormal(&shift, *khypo, *nmax)?;
            let mut r = Report::new("certify-khypo");
            r.push("spec", spec);
            r.push("shift", shift.label());
            r.push("khypo", khypo.to_string());
            r.push("nmax", nmax.to_string());
            push_certificate(&mut r, &cert);
            let code = certificate_exit(&cert);
            Ok((r, code))
        }
        Command::CertifyContractive { spec, order, range } => {
            let shift = shift_from_arg(cli, spec)?;
            let cert = certify_n_contractive(&shift, *order, *range)?;
            let mut r = Report::new("certify-contractive");
            r.push("spec", spec);
            r.push("shift", shift.label());
            push_bounds(&mut r, *order, *range);
            push_certificate(&mut r, &cert);
            let code = certificate_exit(&cert);
            Ok((r, code))
        }
        Command::CertifyChe { spec, order, range } => {
            let shift = shift_from_arg(cli, spec)?;
            let cert = certify_che(&shift, *order, *range)?;
            let mut r = Report::new("certify-che");
            r.push("spec", spec);
            r.push("shift", shift.label());
            push_bounds(&mut r, *order, *range);
            push_certificate(&mut r, &cert);
            let code = certificate_exit(&cert);
            Ok((r, code))
        }
        Command::Diagram { spec, order, range } => {
            let shift = shift_from_arg(cli, spec)?;
            let rep = diagram_check(&shift, *order, *range)?;
            let mut r = Report::new("diagram");
            r.push("spec", spec);
            r.push("shift", shift.label());
            push_bounds(&mut r, *order, *range);
            r.push("contraction", rep.contraction.to_string());
            for cert in [
                &rep.weights_ca,
                &rep.weights_log_ca,
                &rep.moments_log_cm,
                &rep.moments_cm,
            ] {
                let mut line = cert.verdict.name().to_string();
                if let Some(w) = &cert.witness {
                    line.push_str(&format!(" (witness n={} k={})", w.order, w.index));
                }
                r.push(cert.claim.name(), line);
            }
            Ok((r, ExitCode::SUCCESS))
        }
        Command::Aluthge { spec, count } => {
            let shift = shift_from_arg(cli, spec)?;
            let at = aluthge(&shift);
            let mut r = Report::new("aluthge");
            r.push("spec", spec);
            r.push("shift", shift.label());
            r.push("transform", at.label());
            r.push("mode", at.arithmetic_mode());
            weights_report(&mut r, &at, *count)?;
            Ok((r, ExitCode::SUCCESS))
        }
        Command::AluthgeInv { spec, alpha0, count } => {
            let shift = shift_from_arg(cli, spec)?;
            let a0 = alpha0.as_deref().map(parse_scalar_flag).transpose()?;
            let inv = inverse_aluthge(&shift, a0)?;
            let mut r = Report::new("aluthge-inv");
            r.push("spec", spec);
            r.push("shift", shift.label());
            r.push("alpha0", fmt_scalar(&inv.alpha0));
            r.push(
                "alpha0-source",
                match inv.alpha0_source {
                    Alpha0Source::User => "user",
                    Alpha0Source::NumericLimit => "numeric-limit",
                    Alpha0Source::ClosedForm => "closed-form",
                },
            );
            if let Some(d) = inv.limit_diagnostics {
                r.push("terms-used", d.terms_used.to_string());
                r.push("extrapolation-order", d.extrapolation_order.to_string());
                r.push("residual", format!("{:e}", d.residual));
            }
            weights_report(&mut r, &inv.shift, *count)?;
            Ok((r, ExitCode::SUCCESS))
        }
        Command::AglerPreimage { k, count } => {
            let pre = agler_preimage(*k)?;
            let (coef, over_pi) = agler_preimage_alpha0_exact(*k)?;
            let mut r = Report::new("agler-preimage");
            r.push("k", k.to_string());
            r.push("alpha0-closed-form", render_pi_fraction(&coef, over_pi));
            r.push("alpha0", format!("{}", pre.weight_f64(0)?));
            weights_report(&mut r, &pre, *count)?;
            Ok((r, ExitCode::SUCCESS))
        }
        Command::Quotient { spec, spacing, count } => {
            let shift = shift_from_arg(cli, spec)?;
            let q = midshift::shift_model::quotient_shift(&shift, *spacing)?;
            let mut r = Report::new("quotient");
            r.push("spec", spec);
            r.push("shift", shift.label());
            r.push("spacing", spacing.to_string());
            weights_report(&mut r, &q, *count)?;
            Ok((r, ExitCode::SUCCESS))
        }
        Command::Subshift { spec, stride, offset, count } => {
            let shift = shift_from_arg(cli, spec)?;
            let s = midshift::shift_model::subshift(&shift, *stride, *offset)?;
            let mut r = Report::new("subshift");
            r.push("spec", spec);
            r.push("shift", shift.label());
            r.push("stride", stride.to_string());
            r.push("offset", offset.to_string());
            weights_report(&mut r, &s, *count)?;
            Ok((r, ExitCode::SUCCESS))
        }
        Command::Complete2Trivial { a, b, count } => {
            let a = parse_scalar_flag(a)?;
            let b = parse_scalar_flag(b)?;
            let s = trivial_completion(&a, &b)?;
            let mut r = Report::new("complete2-trivial");
            r.push_scalar("target-a", &a);
            r.push_scalar("target-b", &b);
            r.push("shift", s.label());
            weights_report(&mut r, &s, *count)?;
            Ok((r, ExitCode::SUCCESS))
        }
        Command::Complete2Agler { a, b, eps } => {
            let a = parse_scalar_flag(a)?;
            let b = parse_scalar_flag(b)?;
            let cap = std::env::var(M_CAP_ENV)
                .ok()
                .and_then(|v| v.parse::<usize>().ok())
                .unwrap_or(DEFAULT_M_CAP);
            let g = agler_subshift_completion_with_cap(&a, &b, *eps, cap)?;
            let mut r = Report::new("complete2-agler");
            r.push_scalar("target-a", &a);
            r.push_scalar("target-b", &b);
            r.push("eps", format!("{eps:e}"));
            r.push("m", g.m.to_string());
            r.push("n", g.n.to_string());
            r.push("delta", g.delta.to_string());
            r.push_scalar("achieved-a", &g.achieved.0);
            r.push_scalar("achieved-b", &g.achieved.1);
            r.push_scalar("error-a", &g.errors.0);
            r.push_scalar("error-b", &g.errors.1);
            r.push_scalar("gap-ratio", &g.gap_ratio);
            r.push_scalar("gap-ratio-lower-bound", &g.gap_ratio_lower_bound);
            r.push("shift", g.shift.label());
            Ok((r, ExitCode::SUCCESS))
        }
        Command::Complete3Che { a0, a1, a2 } => {
            let a0 = parse_scalar_flag(a0)?;
            let a1 = parse_scalar_flag(a1)?;
            let a2 = parse_scalar_flag(a2)?;
            let v = che_three_weight_test(&a0, &a1, &a2)?;
            let mut r = Report::new("complete3-che");
            r.push_scalar("a0", &a0);
            r.push_scalar("a1", &a1);
            r.push_scalar("a2", &a2);
            r.push("condition-i", if v.condition_i { "pass" } else { "fail" });
            r.push_scalar("condition-i-value", &v.condition_i_value);
            r.push("condition-ii", if v.condition_ii { "pass" } else { "fail" });
            r.push_scalar("condition-ii-lhs", &v.condition_ii_lhs);
            r.push_scalar("condition-ii-rhs", &v.condition_ii_rhs);
            r.push("verdict", if v.sufficient { "pass" } else { "fail" });
            let code = if v.sufficient {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            };
            Ok((r, code))
        }
        Command::Stampfli { a, b, c, count } => {
            let a = parse_scalar_flag(a)?;
            let b = parse_scalar_flag(b)?;
            let c = parse_scalar_flag(c)?;
            let comp = stampfli_completion(&a, &b, &c)?;
            let mut r = Report::new("stampfli");
            r.push_scalar("a", &a);
            r.push_scalar("b", &b);
            r.push_scalar("c", &c);
            r.push_scalar("phi0", &comp.phi0);
            r.push_scalar("phi1", &comp.phi1);
            r.push_scalar("norm-bound-squared", &comp.norm_bound_sq);
            weights_report(&mut r, &comp.shift, *count)?;
            Ok((r, ExitCode::SUCCESS))
        }
        Command::Flatness { spec, order, range, tol } => {
            let shift = shift_from_arg(cli, spec)?;
            let rep = flatness_rigidity_check(&shift, *order, *range, *tol)?;
            let mut r = Report::new("flatness");
            r.push("spec", spec);
            r.push("shift", shift.label());
            push_bounds(&mut r, *order, *range);
            r.push("mid", rep.mid.verdict.name());
            let zeros: Vec<String> = rep
                .zeros
                .iter()
                .map(|(n, k)| format!("(n={n},k={k})"))
                .collect();
            r.push(
                "log-zeros",
                if zeros.is_empty() {
                    "none".to_string()
                } else {
                    zeros.join(" ")
                },
            );
            r.push("flat", rep.flatness.flat.to_string());
            r.push("alarm", rep.alarm.to_string());
            let code = if rep.alarm {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
            Ok((r, code))
        }
        Command::GapRatio { m, n, delta } => {
            let g = gap_ratio(*m, *n, *delta)?;
            let mut r = Report::new("gap-ratio");
            r.push("m", m.to_string());
            r.push("n", n.to_string());
            r.push("delta", delta.to_string());
            r.push_scalar("p", &g.p);
            r.push_scalar("q", &g.q);
            r.push_scalar("r", &g.r);
            r.push_scalar("g1", &g.g1);
            r.push_scalar("g2", &g.g2);
            r.push_scalar("ratio", &g.ratio);
            r.push_scalar("ratio-from-pq", &gap_ratio_from_pq(&g.p, &g.q));
            r.push_scalar("ratio-from-mnd", &gap_ratio_from_mnd(*m, *n, *delta));
            Ok((r, ExitCode::SUCCESS))
        }
        Command::TableProp417 { k } => {
            let (lo, hi) = parse_range(k)?;
            let mut r = Report::new("table-prop417");
            r.push("k-range", format!("{lo}..{hi}"));
            for k in lo..=hi {
                let (coef, over_pi) = agler_preimage_alpha0_exact(k)?;
                let closed = agler_preimage(k)?.weight_f64(0)?;
                let inv = inverse_aluthge(&WeightedShift::agler(k)?, None)?;
                let numeric = inv.alpha0.to_f64();
                r.push(
                    format!("row-{k}"),
                    format!(
                        "closed-form={} closed={} numeric={} abs-delta={:e}",
                        render_pi_fraction(&coef, over_pi),
                        closed,
                        numeric,
                        (closed - numeric).abs()
                    ),
                );
            }
            Ok((r, ExitCode::SUCCESS))
        }
    }
}

fn render_pi_fraction(coef: &num_rational::BigRational, over_pi: bool) -> String {
    use num_traits::One;
    if !over_pi {
        if coef.is_integer() {
            return format!("{}", coef.numer());
        }
        return format!("{}/{}", coef.numer(), coef.denom());
    }
    if coef.denom().is_one() {
        format!("{}/pi", coef.numer())
    } else {
        format!("{}/({} pi)", coef.numer(), coef.denom())
    }
}

fn parse_range(text: &str) -> CliResult<(u64, u64)> {
    let parts: Vec<&str> = text.split("..").collect();
    if parts.len() == 1 {
        let v: u64 = parts[0]
            .parse()
            .map_err(|_| CliError::Domain(format!("bad index `{text}`")))?;
        return Ok((v, v));
    }
    if parts.len() == 2 {
        let lo: u64 = parts[0]
            .parse()
            .map_err(|_| CliError::Domain(format!("bad range `{text}`")))?;
        let hi: u64 = parts[1]
            .parse()
            .map_err(|_| CliError::Domain(format!("bad range `{text}`")))?;
        if lo <= hi {
            return Ok((lo, hi));
        }
    }
    Err(CliError::Domain(format!(
        "bad range `{text}`; expected forms like 2..14"
    )))
}
