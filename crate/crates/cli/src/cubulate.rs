use crate::output::{list_text, print_json, CubulateReport};
use crate::{config_error, library_error, read_file, Format};
use clap::Args;
use multisect::cubulation::{homology, lift_multisection, vertex_link_check, DirectedCubeComplex, Quotient, MAX_LIFT_DIM};
use multisect::TorusParams;
use std::path::PathBuf;

#[derive(Args, Debug)]
pub struct CubulateArgs {
    /// One-cube complex from a permutation such as `2,3,1`, or `identity`.
    #[arg(long, conflicts_with = "file")]
    sigma: Option<String>,
    /// Cube dimension (required with `--sigma identity`).
    #[arg(long)]
    n: Option<usize>,
    /// Number of pieces; must equal (n+1)/2 when given.
    #[arg(long)]
    k: Option<u32>,
    /// Complex in the `n <dim> cubes <count>` text format.
    #[arg(long)]
    file: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

fn load(args: &CubulateArgs) -> anyhow::Result<(DirectedCubeComplex, String)> {
    match (&args.sigma, &args.file) {
        (Some(s), None) => {
            let sigma: Vec<usize> = if s.trim() == "identity" {
                let n = args.n.ok_or_else(|| config_error("--n is required with --sigma identity"))?;
                (1..=n).collect()
            } else {
                s.split(',')
                    .map(|p| p.trim().parse::<usize>())
                    .collect::<Result<_, _>>()
                    .map_err(|_| config_error(format!("`{s}` is not a comma-separated permutation")))?
            };
            if let Some(n) = args.n {
                if n != sigma.len() {
                    return Err(config_error(format!("permutation has {} entries but n = {n}", sigma.len())));
                }
            }
            let c = DirectedCubeComplex::from_permutation(&sigma).map_err(library_error)?;
            Ok((c, format!("sigma {s}")))
        }
        (None, Some(path)) => {
            let text = read_file(path)?;
            let c = DirectedCubeComplex::parse(&text)?;
            if let Some(n) = args.n {
                if n != c.n {
                    return Err(config_error(format!("file describes n = {}, not {n}", c.n)));
                }
            }
            Ok((c, path.display().to_string()))
        }
        _ => Err(config_error("give exactly one of --sigma and --file")),
    }
}

pub fn run(args: CubulateArgs) -> anyhow::Result<bool> {
    let (c, source) = load(&args)?;
    if let Some(k) = args.k {
        if 2 * k as usize != c.n + 1 {
            return Err(config_error(format!("k = {k} does not match n = {}", c.n)));
        }
    }
    let validation = c.validate();
    let mut notes = Vec::new();
    let mut report = CubulateReport {
        command: "cubulate".into(),
        source,
        n: c.n,
        cubes: c.cubes,
        valid: validation.ok(),
        violations: validation.violations.clone(),
        even_permutation: c.permutation_parity(),
        cell_counts: validation.cell_counts.clone(),
        homology: None,
        links: None,
        lift: None,
        notes: Vec::new(),
    };
    if report.even_permutation == Some(false) {
        notes.push("the permutation is odd".into());
    }
    if report.valid {
        let q = Quotient::new(&c, 1)?;
        match q.chain_complex() {
            Ok(cc) => report.homology = Some(homology(&cc)),
            Err(e) => notes.push(format!("homology skipped: {e}")),
        }
        if c.n == 3 {
            report.links = Some(vertex_link_check(&c)?);
        }
        if c.n <= MAX_LIFT_DIM && TorusParams::from_dim(c.n).is_ok() {
            report.lift = Some(lift_multisection(&c)?);
        } else {
            notes.push(format!("no multisection to lift for n = {}", c.n));
        }
    }
    report.notes = notes;
    let links_ok = report.links.as_ref().is_none_or(|ls| ls.iter().all(|l| l.is_sphere()));
    let lift_ok = report.lift.as_ref().is_none_or(|l| l.consistent());
    let passed = report.valid && links_ok && lift_ok;
    match args.format {
        Format::Json => print_json(&report)?,
        Format::Csv => return Err(config_error("cubulate reports are text or json")),
        Format::Text => write_text(&report),
    }
    Ok(passed)
}

fn write_text(r: &CubulateReport) {
    println!("complex from {}: n = {}, {} cubes", r.source, r.n, r.cubes);
    if !r.valid {
        println!("INVALID");
        for v in &r.violations {
            println!("  {v}");
        }
        return;
    }
    println!("valid directed complex");
    if let Some(counts) = &r.cell_counts {
        println!("quotient cells per dimension: {}", list_text(counts));
    }
    if let Some(h) = &r.homology {
        for (d, g) in h.iter().enumerate() {
            println!("H_{d} = {g}");
        }
    }
    if let Some(links) = &r.links {
        for l in links {
            println!(
                "vertex link at cube {} corner {:?}: V {} E {} F {}, chi {}, {}",
                l.cube,
                l.corner,
                l.vertices,
                l.edges,
                l.triangles,
                l.euler,
                if l.is_sphere() { "sphere" } else { "not a sphere" }
            );
        }
    }
    if let Some(l) = &r.lift {
        let genus: Vec<String> = l.piece_genus.iter().map(|g| g.map_or("-".into(), |g| g.to_string())).collect();
        println!("lifted pieces: {} (k = {}), genus {}", l.piece_genus.len(), l.k, genus.join("/"));
        if let Some(g) = l.central_genus {
            println!("central surface genus {g}");
        }
        println!("n times cube count: {}", l.cube_count_genus);
        println!("orientable: {}", l.orientable);
        if l.consistent() {
            println!("lift consistent across every gluing");
        } else {
            println!("lift mismatches:");
            for m in &l.mismatches {
                println!("  {m}");
            }
        }
    }
    for note in &r.notes {
        println!("note: {note}");
    }
}
