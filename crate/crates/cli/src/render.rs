//! Report rendering: canonical JSON, one CSV per table or figure series, and
//! a Markdown summary.

use mpgw_core::eval::{ClassSummaryRow, ClassificationGrid, EdaReport, OutputFormat, RegressionReport, Report};

/// A rendered file, relative to the output directory.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputFile {
    pub name: String,
    pub contents: Vec<u8>,
}

fn csv_file(name: &str, header: &[&str], rows: Vec<Vec<String>>) -> OutputFile {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        debug_assert_eq!(r.len(), header.len());
        w.write_record(&r).expect("in-memory write");
    }
    OutputFile {
        name: name.into(),
        contents: w.into_inner().expect("in-memory flush"),
    }
}

fn num(v: f64) -> String {
    format!("{v}")
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

fn md3(v: Option<f64>) -> String {
    v.map_or("n/a".into(), |v| format!("{v:.3}"))
}

fn md_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut s = format!("| {} |\n|{}\n", header.join(" | "), "---|".repeat(header.len()));
    for r in rows {
        s += &format!("| {} |\n", r.join(" | "));
    }
    s
}

fn eda_csv(eda: &EdaReport) -> Vec<OutputFile> {
    let mut header = vec!["feature"];
    header.extend(eda.correlation.labels.iter().map(String::as_str));
    let corr = eda
        .correlation
        .labels
        .iter()
        .zip(&eda.correlation.values)
        .map(|(l, row)| std::iter::once(l.clone()).chain(row.iter().map(|v| num(*v))).collect())
        .collect();
    let mut hist = Vec::new();
    for h in &eda.histograms {
        for (k, c) in h.histogram.counts.iter().enumerate() {
            hist.push(vec![
                h.column.clone(),
                k.to_string(),
                num(h.histogram.edges[k]),
                num(h.histogram.edges[k + 1]),
                c.to_string(),
            ]);
        }
    }
    let pair_header: Vec<&str> = eda.pair_columns.iter().map(String::as_str).collect();
    let pairs = eda
        .pair_rows
        .iter()
        .map(|r| r.iter().map(|v| num(*v)).collect())
        .collect();
    vec![
        csv_file("correlation.csv", &header, corr),
        csv_file(
            "figure1_histograms.csv",
            &["column", "bin", "lower", "upper", "count"],
            hist,
        ),
        csv_file("figure3_pairplot.csv", &pair_header, pairs),
    ]
}

fn regression_csv(r: &RegressionReport) -> Vec<OutputFile> {
    let rows = r
        .rows
        .iter()
        .map(|row| {
            let m = row.metrics.as_ref();
            vec![
                row.model.clone(),
                "Regression".into(),
                opt(m.map(|m| m.mae)),
                opt(m.map(|m| m.mse)),
                opt(m.map(|m| m.rmse)),
                opt(m.map(|m| m.r2)),
                opt(m.map(|m| m.adj_r2)),
                opt(row.cv_mean_r2),
                row.hyperparameters
                    .iter()
                    .map(|(k, v)| format!("{k}={v}"))
                    .collect::<Vec<_>>()
                    .join(";"),
                row.error.clone().unwrap_or_default(),
            ]
        })
        .collect();
    let mut files = vec![csv_file(
        "table3.csv",
        &[
            "model",
            "type",
            "mae",
            "mse",
            "rmse",
            "r2",
            "adj_r2",
            "cv_mean_r2",
            "hyperparameters",
            "error",
        ],
        rows,
    )];
    let mut sel = Vec::new();
    for s in &r.selections {
        for (v, score) in s.grid.iter().zip(&s.cv_mean_r2) {
            sel.push(vec![
                s.model.clone(),
                s.parameter.clone(),
                num(*v),
                num(*score),
                (*v == s.selected).to_string(),
            ]);
        }
    }
    files.push(csv_file(
        "cv_selection.csv",
        &["model", "parameter", "value", "cv_mean_r2", "selected"],
        sel,
    ));
    if let Some(d) = &r.diagnostics {
        files.push(csv_file(
            "figure4_true_vs_pred.csv",
            &["y_true", "y_pred"],
            d.true_vs_pred.iter().map(|(t, p)| vec![num(*t), num(*p)]).collect(),
        ));
        files.push(csv_file(
            "figure5_residuals.csv",
            &["y_pred", "residual"],
            d.residuals.iter().map(|(p, e)| vec![num(*p), num(*e)]).collect(),
        ));
        let h = &d.residual_histogram;
        files.push(csv_file(
            "figure6_residual_histogram.csv",
            &["bin", "lower", "upper", "count"],
            h.counts
                .iter()
                .enumerate()
                .map(|(k, c)| vec![k.to_string(), num(h.edges[k]), num(h.edges[k + 1]), c.to_string()])
                .collect(),
        ));
    }
    files.push(csv_file(
        "figure7_r2.csv",
        &["model", "r2"],
        r.r2_chart.iter().map(|(m, v)| vec![m.clone(), num(*v)]).collect(),
    ));
    files
}

fn summary_rows(rows: &[ClassSummaryRow]) -> Vec<Vec<String>> {
    rows.iter()
        .map(|r| {
            vec![
                r.model.clone(),
                "Classification Summary".into(),
                num(r.precision),
                num(r.recall),
                num(r.f1),
                r.source.clone(),
            ]
        })
        .collect()
}

fn classification_csv(g: &ClassificationGrid) -> Vec<OutputFile> {
    let rows = g
        .rows
        .iter()
        .map(|row| {
            let rep = row.report.as_ref();
            vec![
                row.model.clone(),
                "Classification".into(),
                opt(rep.map(|r| r.accuracy)),
                row.c.map_or("Default".into(), num),
                opt(rep.map(|r| r.class0.precision)),
                opt(rep.map(|r| r.class0.recall)),
                opt(rep.map(|r| r.class0.f1)),
                opt(rep.map(|r| r.class1.precision)),
                opt(rep.map(|r| r.class1.recall)),
                opt(rep.map(|r| r.class1.f1)),
                opt(row.auc),
                row.error.clone().unwrap_or_default(),
            ]
        })
        .collect();
    let mut roc = Vec::new();
    for s in &g.roc {
        for k in 0..s.curve.fpr.len() {
            let threshold = if k == 0 {
                String::new()
            } else {
                num(s.curve.thresholds[k - 1])
            };
            roc.push(vec![
                s.name.clone(),
                s.source.clone(),
                k.to_string(),
                threshold,
                num(s.curve.fpr[k]),
                num(s.curve.tpr[k]),
            ]);
        }
    }
    let summary_header = ["model", "type", "precision", "recall", "f1", "source"];
    vec![
        csv_file(
            "table4.csv",
            &[
                "model",
                "type",
                "accuracy",
                "c",
                "class0_precision",
                "class0_recall",
                "class0_f1",
                "class1_precision",
                "class1_recall",
                "class1_f1",
                "auc",
                "error",
            ],
            rows,
        ),
        csv_file("table5.csv", &summary_header, summary_rows(&g.class0)),
        csv_file("table6.csv", &summary_header, summary_rows(&g.class1)),
        csv_file(
            "figures8_11_roc.csv",
            &["series", "source", "point", "threshold", "fpr", "tpr"],
            roc,
        ),
        csv_file(
            "roc_auc.csv",
            &["series", "source", "auc"],
            g.roc
                .iter()
                .map(|s| vec![s.name.clone(), s.source.clone(), num(s.curve.auc)])
                .collect(),
        ),
        csv_file(
            "figures12_17_class_summary.csv",
            &["figure", "class", "model", "metric", "value"],
            class_figures(g),
        ),
    ]
}

/// Bar-chart data per class: all three metrics, then precision alone, then
/// recall alone (figures 12-14 for class 0, 15-17 for class 1).
fn class_figures(g: &ClassificationGrid) -> Vec<Vec<String>> {
    let mut out = Vec::new();
    for (class, rows, first) in [(0, &g.class0, 12), (1, &g.class1, 15)] {
        let panels: [(usize, &[&str]); 3] = [
            (first, &["precision", "recall", "f1"]),
            (first + 1, &["precision"]),
            (first + 2, &["recall"]),
        ];
        for (figure, metrics) in panels {
            for r in rows.iter() {
                for &m in metrics {
                    let v = match m {
                        "precision" => r.precision,
                        "recall" => r.recall,
                        _ => r.f1,
                    };
                    out.push(vec![
                        figure.to_string(),
                        class.to_string(),
                        r.model.clone(),
                        m.into(),
                        num(v),
                    ]);
                }
            }
        }
    }
    out
}

pub fn markdown(report: &Report) -> String {
    let p = &report.provenance;
    let mut s = String::from("# Auto MPG workbench report\n\n");
    s += &format!(
        "Data: {} rows, sha256 `{}`{}; horsepower median {} imputed into {} row(s). Seed {}, split {}, threshold {} mpg, {} CV folds. Library {}.\n\n",
        p.data.n_rows,
        p.data.sha256,
        if p.data.matches_reference { " (reference file)" } else { "" },
        p.data.horsepower_median,
        p.data.missing_horsepower_rows.len(),
        p.config.seed,
        p.config.split_ratio,
        p.config.threshold_mpg,
        p.config.cv_folds,
        p.library_version
    );
    if let Some(eda) = &report.eda {
        s += "## Correlation matrix\n\n";
        let mut header = vec!["feature"];
        header.extend(eda.correlation.labels.iter().map(String::as_str));
        let rows: Vec<Vec<String>> = eda
            .correlation
            .labels
            .iter()
            .zip(&eda.correlation.values)
            .map(|(l, r)| {
                std::iter::once(l.clone())
                    .chain(r.iter().map(|v| format!("{v:.3}")))
                    .collect()
            })
            .collect();
        s += &md_table(&header, &rows);
        s += "\n";
    }
    if let Some(r) = &report.regression {
        s += &format!("## Regression models (test n = {}, standardized units)\n\n", r.n_test);
        let rows: Vec<Vec<String>> = r
            .rows
            .iter()
            .map(|row| {
                let m = row.metrics.as_ref();
                vec![
                    row.model.clone(),
                    md3(m.map(|m| m.mae)),
                    md3(m.map(|m| m.mse)),
                    md3(m.map(|m| m.rmse)),
                    md3(m.map(|m| m.r2)),
                    md3(m.map(|m| m.adj_r2)),
                    md3(row.cv_mean_r2),
                    row.error.clone().unwrap_or_default(),
                ]
            })
            .collect();
        s += &md_table(&["Model", "MAE", "MSE", "RMSE", "R²", "Adj R²", "CV R²", "Note"], &rows);
        s += "\nSelected hyperparameters:\n\n";
        for sel in &r.selections {
            s += &format!(
                "- {}: {} = {:.4e} (CV R² {:.3})\n",
                sel.model, sel.parameter, sel.selected, sel.selected_cv_mean_r2
            );
        }
        s += "\n";
    }
    if let Some(g) = &report.classification {
        s += &format!(
            "## Classification grid (test n = {}, RBF γ = {:.4})\n\n",
            g.n_test, g.rbf_gamma
        );
        let rows: Vec<Vec<String>> = g
            .rows
            .iter()
            .map(|row| {
                let rep = row.report.as_ref();
                vec![
                    row.model.clone(),
                    md3(rep.map(|r| r.accuracy)),
                    row.c.map_or("Default".into(), |c| format!("{c:?}")),
                    md3(rep.map(|r| r.class0.precision)),
                    md3(rep.map(|r| r.class0.recall)),
                    md3(rep.map(|r| r.class0.f1)),
                    md3(rep.map(|r| r.class1.precision)),
                    md3(rep.map(|r| r.class1.recall)),
                    md3(rep.map(|r| r.class1.f1)),
                    md3(row.auc),
                ]
            })
            .collect();
        s += &md_table(
            &["Model", "Accuracy", "C", "P0", "R0", "F1 0", "P1", "R1", "F1 1", "AUC"],
            &rows,
        );
        for (title, rows) in [("Class 0 summary", &g.class0), ("Class 1 summary", &g.class1)] {
            s += &format!("\n### {title}\n\n");
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.model.clone(),
                        format!("{:.3}", r.precision),
                        format!("{:.3}", r.recall),
                        format!("{:.3}", r.f1),
                        r.source.clone(),
                    ]
                })
                .collect();
            s += &md_table(&["Model", "Precision", "Recall", "F1", "Source row"], &body);
        }
        s += "\n### ROC AUC\n\n";
        for r in &g.roc {
            s += &format!("- {}: {:.3}\n", r.name, r.curve.auc);
        }
    }
    s
}

/// Renders every requested artifact; `stem` names the JSON and Markdown files.
pub fn render(report: &Report, stem: &str, format: OutputFormat) -> Vec<OutputFile> {
    let want = |f: OutputFormat| format == OutputFormat::All || format == f;
    let mut files = Vec::new();
    if want(OutputFormat::Json) {
        let mut json = serde_json::to_vec_pretty(report).expect("report serializes");
        json.push(b'\n');
        files.push(OutputFile {
            name: format!("{stem}.json"),
            contents: json,
        });
    }
    if want(OutputFormat::Csv) {
        if let Some(e) = &report.eda {
            files.extend(eda_csv(e));
        }
        if let Some(r) = &report.regression {
            files.extend(regression_csv(r));
        }
        if let Some(g) = &report.classification {
            files.extend(classification_csv(g));
        }
    }
    if want(OutputFormat::Markdown) {
        files.push(OutputFile {
            name: format!("{stem}.md"),
            contents: markdown(report).into_bytes(),
        });
    }
    files
}
