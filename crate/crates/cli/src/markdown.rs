//! Human-readable rendering of a report.  Works from the already-stringified
//! report tree, so the markdown is as deterministic as the JSON.

use std::fmt::Write;

use crate::report::{AnalysisReport, ClassificationReport, IndexedValue, Report};

fn matrix_block(out: &mut String, title: &str, m: &[[String; 3]; 3]) {
    let _ = writeln!(out, "**{title}**\n");
    let _ = writeln!(out, "|      | e1 | e2 | e3 |");
    let _ = writeln!(out, "|------|----|----|----|");
    for (i, row) in m.iter().enumerate() {
        let _ = writeln!(out, "| e{} | {} | {} | {} |", i + 1, row[0], row[1], row[2]);
    }
    out.push('\n');
}

fn indexed_block(out: &mut String, title: &str, header: &str, entries: &[IndexedValue]) {
    let _ = writeln!(out, "**{title}**\n");
    if entries.is_empty() {
        let _ = writeln!(out, "(all entries zero)\n");
        return;
    }
    let _ = writeln!(out, "| {header} | value |");
    let _ = writeln!(out, "|---|---|");
    for e in entries {
        let _ = writeln!(out, "| ({}, {}, {}) | {} |", e.i, e.j, e.k, e.value);
    }
    out.push('\n');
}

fn analysis_section(out: &mut String, a: &AnalysisReport) {
    let _ = writeln!(out, "## analysis\n");
    indexed_block(out, "connection <nabla_i e_j, e_k>", "(i, j, k)", &a.connection);
    matrix_block(out, "Ricci", &a.ricci);
    matrix_block(out, "phi", &a.phi);
    let _ = writeln!(out, "| invariant | value |");
    let _ = writeln!(out, "|---|---|");
    let rows = [
        ("scal", a.scal.as_str()),
        ("lambda = Ric(zeta, zeta)", a.lambda.as_str()),
        ("trace phi", a.trace_phi.as_str()),
        ("|phi|^2", a.norm2_phi.as_str()),
        ("det horizontal", a.det_horizontal.as_str()),
        ("trace(phi J)", a.trace_phi_j.as_str()),
        ("energy density", a.energy_density.as_str()),
        ("geodesic defect", a.geodesic_defect.as_str()),
        ("unit-harmonic residual", a.unit_harmonic_residual.as_str()),
        ("harmonic-map residual", a.harmonic_map_residual.as_str()),
        ("Killing residual", a.killing_residual.as_str()),
        ("Sasakian residual", a.sasakian_residual.as_str()),
    ];
    for (k, v) in rows {
        let _ = writeln!(out, "| {k} | {v} |");
    }
    if let Some(l1) = &a.lambda1 {
        let _ = writeln!(out, "| lambda1 | {l1} |");
    }
    out.push('\n');
    let f = &a.flags;
    let _ = writeln!(
        out,
        "flags: harmonic={} totally_geodesic={} divergence_free={} killing={} \
         ricci_aligned={} jacobi_ok={}\n",
        f.harmonic, f.totally_geodesic, f.divergence_free, f.killing, f.ricci_aligned, f.jacobi_ok
    );
    let _ = writeln!(
        out,
        "contact: trace(phi J) = {}, wedge = {}, gap = {}, is_contact = {}\n",
        a.contact.trace_phi_j, a.contact.wedge_value, a.contact.route_gap, a.contact.is_contact
    );
    let _ = writeln!(out, "**identity residuals**\n");
    let _ = writeln!(out, "| identity | value | asserted | holds |");
    let _ = writeln!(out, "|---|---|---|---|");
    for r in &a.residuals {
        let _ = writeln!(out, "| {} | {} | {} | {} |", r.name, r.value, r.asserted, r.holds);
    }
    out.push('\n');
}

fn classification_section(out: &mut String, c: &ClassificationReport) {
    let _ = writeln!(out, "## classification\n");
    let _ = writeln!(out, "- case: `{}`", c.case);
    let _ = writeln!(out, "- family: {}", c.family);
    let _ = writeln!(out, "- lambda = {}, |phi|^2 = {}, scal = {}", c.lambda, c.norm2_phi, c.scal);
    if let Some(l1) = &c.lambda1 {
        let _ = writeln!(out, "- lambda1 = {l1}");
    }
    if let Some(b) = &c.b {
        let _ = writeln!(out, "- b = {b}");
    }
    let _ = writeln!(
        out,
        "- algebra: input {}, compact obstruction: {}",
        c.input_milnor, c.compact_obstruction
    );
    if let Some(em) = &c.emitted {
        let _ = writeln!(
            out,
            "\n**normal form** brackets ({}, {}, {}), type {}\n",
            em.brackets[0], em.brackets[1], em.brackets[2], em.milnor
        );
        let _ = writeln!(out, "| Ricci diagonal | e1 | e2 | e3 |");
        let _ = writeln!(out, "|---|---|---|---|");
        let _ = writeln!(
            out,
            "| reconstructed | {} | {} | {} |",
            em.reconstructed_ricci[0], em.reconstructed_ricci[1], em.reconstructed_ricci[2]
        );
        let _ = writeln!(
            out,
            "| expected | {} | {} | {} |",
            em.expected_ricci[0], em.expected_ricci[1], em.expected_ricci[2]
        );
        let _ = writeln!(out, "\nroundtrip residual: {}", em.roundtrip_residual);
    }
    if let Some(fc) = &c.frame_checks {
        let _ = writeln!(
            out,
            "\neigenframe checks: phi_form = {}, ric12 = {}, scalb = {} (orientation {})",
            fc.phi_form_residual, fc.ric12_residual, fc.scalb_residual, fc.orientation
        );
    }
    if let Some(r) = &c.scal_lambda_residual {
        let _ = writeln!(out, "\n|Scal - lambda| = {r}");
    }
    if let Some(r) = &c.rescaled {
        let _ = writeln!(
            out,
            "\nafter homothety by b = {}: Sasakian residual {}",
            r.b, r.sasakian_residual
        );
    }
    if !c.warnings.is_empty() {
        let _ = writeln!(out, "\nwarnings:");
        for w in &c.warnings {
            let _ = writeln!(out, "- {w}");
        }
    }
    out.push('\n');
}

pub fn render(report: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# triflow {} report\n", report.mode);
    let _ = writeln!(
        out,
        "- kernel: {}\n- verdict: **{}**",
        report.kernel,
        if report.verdict.pass { "PASS" } else { "FAIL" }
    );
    let _ = writeln!(
        out,
        "- tolerances: algebraic {}, fd {}, fd_step {}\n",
        report.tolerances.algebraic, report.tolerances.fd, report.tolerances.fd_step
    );
    if let Some(m) = &report.model {
        let _ = writeln!(out, "## model\n");
        let _ = writeln!(out, "- kind: `{}`", m.kind);
        for p in &m.params {
            let _ = writeln!(out, "- {} = {}", p.name, p.value);
        }
        let _ = writeln!(out, "- algebra type: {}, jacobi_ok: {}\n", m.milnor, m.jacobi_ok);
        indexed_block(&mut out, "brackets [e_i, e_j] . e_k", "(i, j, k)", &m.brackets);
    }
    if let Some(f) = &report.field {
        let _ = writeln!(out, "field: ({}, {}, {})\n", f[0], f[1], f[2]);
    }
    if let Some(a) = &report.analysis {
        analysis_section(&mut out, a);
    }
    if let Some(c) = &report.classification {
        classification_section(&mut out, c);
    }
    if let Some(f) = &report.finder {
        let _ = writeln!(out, "## finder\n");
        let _ = writeln!(
            out,
            "seeds {} / converged {} / dropped {}, continuous family: {}\n",
            f.seeds, f.converged, f.dropped, f.continuous_family
        );
        let _ = writeln!(out, "| direction | residual | basin | axis | harmonic | TG | Killing |");
        let _ = writeln!(out, "|---|---|---|---|---|---|---|");
        for d in &f.directions {
            let axis = d.matches_axis.map_or("-".to_string(), |k| format!("e{k}"));
            let _ = writeln!(
                out,
                "| ({}, {}, {}) | {} | {} | {} | {} | {} | {} |",
                d.direction[0],
                d.direction[1],
                d.direction[2],
                d.residual,
                d.basin_count,
                axis,
                d.harmonic,
                d.totally_geodesic,
                d.killing
            );
        }
        out.push('\n');
    }
    if let Some(c) = &report.chart {
        let _ = writeln!(out, "## chart cross-validation\n");
        let _ = writeln!(
            out,
            "chart `{}`: {} grid points, curvature step {}",
            c.chart, c.grid_points, c.curvature_step
        );
        let _ = writeln!(out, "- Ricci residual: {}", c.ricci_residual);
        if let Some(s) = &c.structure_residual {
            let _ = writeln!(out, "- structure residual: {s}");
        }
        if let Some(p) = &c.phi_residual {
            let _ = writeln!(out, "- phi residual: {p}");
        }
        out.push('\n');
    }
    if let Some(cat) = &report.catalog {
        let _ = writeln!(out, "## catalog\n");
        for e in &cat.entries {
            let _ = writeln!(
                out,
                "### {} ({}, kernel {}) - {}\n",
                e.name,
                e.case,
                e.kernel,
                if e.passed { "pass" } else { "FAIL" }
            );
            let _ = writeln!(out, "{}\n", e.summary);
            let _ = writeln!(out, "| fact | provenance | passed | detail |");
            let _ = writeln!(out, "|---|---|---|---|");
            for f in &e.facts {
                let _ = writeln!(
                    out,
                    "| {} | {} | {} | {} |",
                    f.name, f.provenance, f.passed, f.detail
                );
            }
            out.push('\n');
        }
    }
    if let Some(s) = &report.sweep {
        let _ = writeln!(out, "## sweep\n");
        let _ = writeln!(out, "{} models, seed {}, {} workers\n", s.count, s.seed, s.workers);
        let _ = writeln!(out, "| alpha | beta | gamma | case | algebra | lambda | b | harmonic |");
        let _ = writeln!(out, "|---|---|---|---|---|---|---|---|");
        for r in &s.rows {
            let _ = writeln!(
                out,
                "| {} | {} | {} | {} | {} | {} | {} | {} |",
                r.alpha,
                r.beta,
                r.gamma,
                r.case,
                r.milnor,
                r.lambda,
                r.b.as_deref().unwrap_or("-"),
                r.harmonic
            );
        }
        out.push('\n');
    }
    if !report.warnings.is_empty() {
        let _ = writeln!(out, "## warnings\n");
        for w in &report.warnings {
            let _ = writeln!(out, "- {w}");
        }
        out.push('\n');
    }
    let _ = writeln!(out, "## verdict\n");
    if report.verdict.pass {
        let _ = writeln!(out, "PASS");
    } else {
        let _ = writeln!(out, "FAIL");
        for f in &report.verdict.failures {
            let _ = writeln!(out, "- {f}");
        }
    }
    out
}
