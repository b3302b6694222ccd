use crate::output::{list_text, opt_set_text, print_json, set_text, GoldenComparison, HandleRow, HandlesReport};
use crate::{config_error, library_error, Format};
use clap::Args;
use multisect::golden;
use multisect::handles::descriptor::EnumerationOrder;
use multisect::handles::{decompose, decompose_t4, Decomposition};
use multisect::{IndexSet, TorusParams};

#[derive(Args, Debug)]
pub struct HandlesArgs {
    /// Dimension of the torus (odd, or 4 for the hand-listed trisection).
    #[arg(long)]
    n: Option<usize>,
    /// Index set, e.g. `0,2`; translated to its simple form.
    #[arg(long = "I")]
    index_set: Option<String>,
    /// Compare against an embedded printed table.
    #[arg(long)]
    golden: Option<String>,
    /// Emit only the first rows.
    #[arg(long)]
    limit: Option<usize>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

pub fn run(args: HandlesArgs) -> anyhow::Result<bool> {
    let table = args.golden.as_deref().map(golden::load).transpose().map_err(library_error)?;
    let n = match (args.n, &table) {
        (Some(n), Some(t)) if n != t.n => return Err(config_error(format!("table {} is for n = {}, not {n}", t.name, t.n))),
        (Some(n), _) => n,
        (None, Some(t)) => t.n,
        (None, None) => return Err(config_error("--n is required without --golden")),
    };
    let params = TorusParams::from_dim(n).map_err(library_error)?;
    let requested = match (&args.index_set, &table) {
        (Some(text), _) => IndexSet::parse(params.k, text).map_err(library_error)?,
        (None, Some(t)) => t.set().map_err(library_error)?,
        (None, None) => return Err(config_error("--I is required without --golden")),
    };
    if requested.is_full() {
        return Err(config_error("index set must be a proper subset of Z_k"));
    }
    let (set, shift) = requested.canonicalize_simple();
    if let Some(t) = &table {
        if t.index_set != set.elements {
            return Err(config_error(format!("table {} is for I = {}, not {set}", t.name, set_text(&t.index_set))));
        }
    }
    let limit = args.limit.or(table.as_ref().map(|t| t.rows.len()));
    let order = table.as_ref().map(|t| t.order()).unwrap_or_default();
    let mut d = build(&params, &set, &order, limit)?;
    if let Some(l) = limit {
        d.records.truncate(l);
    }
    let golden = table.map(|t| {
        let diffs = golden::diff_lines(&d.summary_lines(), &t.lines());
        GoldenComparison { name: t.name.clone(), rows: t.rows.len(), matched: diffs.is_empty(), diffs }
    });
    let report = HandlesReport {
        command: "handles".into(),
        n,
        k: params.k,
        index_set: set.elements.clone(),
        requested_index_set: requested.elements.clone(),
        shift,
        max_h: d.max_h(),
        rows: rows(&d),
        golden,
    };
    match args.format {
        Format::Json => print_json(&report)?,
        Format::Csv => write_csv(&report)?,
        Format::Text => write_text(&report),
    }
    Ok(report.golden.as_ref().is_none_or(|g| g.matched))
}

fn build(params: &TorusParams, set: &IndexSet, order: &EnumerationOrder, limit: Option<usize>) -> anyhow::Result<Decomposition> {
    if params.is_odd() {
        decompose(params, set, order, limit).map_err(library_error)
    } else {
        decompose_t4(set).map_err(library_error)
    }
}

fn rows(d: &Decomposition) -> Vec<HandleRow> {
    d.records
        .iter()
        .map(|r| {
            let desc = r.descriptor.as_ref();
            HandleRow {
                z: r.z,
                j: desc.map(|d| d.j.clone()),
                i_star: desc.map(|d| d.i_star),
                u: desc.map(|d| d.u.clone()),
                v: desc.map(|d| d.v.clone()),
                v_minus: desc.map(|d| d.v_minus.clone()),
                u_circ: desc.map(|d| d.u_circ.clone()),
                u_minus: desc.map(|d| d.u_minus.clone()),
                rep: r.rep_text.clone(),
                h: r.h,
                copies: r.copies.to_string(),
                glue_to: r.glue_to.clone(),
            }
        })
        .collect()
}

const HEADER: [&str; 12] = ["J", "i_star", "U", "V", "Vminus", "Ucirc", "Uminus", "rep", "h", "z", "glue_to", "copies"];

fn fields(r: &HandleRow) -> [String; 12] {
    [
        opt_set_text(&r.j),
        r.i_star.map_or("-".into(), |i| i.to_string()),
        opt_set_text(&r.u),
        opt_set_text(&r.v),
        opt_set_text(&r.v_minus),
        opt_set_text(&r.u_circ),
        opt_set_text(&r.u_minus),
        r.rep.clone(),
        r.h.to_string(),
        r.z.to_string(),
        list_text(&r.glue_to),
        r.copies.clone(),
    ]
}

fn write_text(report: &HandlesReport) {
    let requested = set_text(&report.requested_index_set);
    let set = set_text(&report.index_set);
    if report.shift != 0 {
        println!("I = {requested} is the translate of {set} by {}; showing X_{set}", report.shift);
    }
    println!("X_I for I = {set} in T^{} (k = {}), {} pieces, max h {}", report.n, report.k, report.rows.len(), report.max_h);
    let table: Vec<[String; 12]> = report.rows.iter().map(fields).collect();
    let mut widths: Vec<usize> = HEADER.iter().map(|h| h.chars().count()).collect();
    for row in &table {
        for (w, f) in widths.iter_mut().zip(row) {
            *w = (*w).max(f.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        println!("{}", padded.join("  ").trim_end());
    };
    line(HEADER.to_vec());
    for row in &table {
        line(row.iter().map(String::as_str).collect());
    }
    if let Some(g) = &report.golden {
        if g.matched {
            println!("golden {}: match ({} rows)", g.name, g.rows);
        } else {
            println!("golden {}: {} differing rows", g.name, g.diffs.len());
            for d in &g.diffs {
                println!("  {d}");
            }
        }
    }
}

fn write_csv(report: &HandlesReport) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_writer(std::io::stdout());
    w.write_record(HEADER)?;
    for row in &report.rows {
        w.write_record(fields(row))?;
    }
    w.flush()?;
    Ok(())
}
