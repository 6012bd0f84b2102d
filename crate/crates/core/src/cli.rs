//! Command-line front end. Every command reads text files, runs one
//! pipeline, and emits a deterministic report: all collections are
//! iterated in sorted order and output is assembled before printing.
//!
//! Exit codes: 0 when the command succeeds (or verifies), 1 when a
//! domain check fails and the failure is reported, 2 when an input file
//! or argument does not parse.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, Subcommand};

use crate::algfile;
use crate::cover::{universal_cover, CoverError, TruncatedCover};
use crate::field::{Field, GroundField, PrimeField, Rationals};
use crate::knit::{knit, Component};
use crate::meshcat::{MeshCtx, MeshError, TruncationInfo};
use crate::modulation::SplitModulation;
use crate::quiver::{TranslationQuiver, VertexId};
use crate::tqfile;
use crate::wellbehaved::{
    self, build_well_behaved, check_generalized_standard, composite_degree,
    verify_graded_covering, verify_injectivity, WbError,
};

#[derive(Parser)]
#[command(
    name = "arq",
    about = "Exact-arithmetic toolkit for translation quivers and AR components",
    version
)]
struct Cli {
    /// Ground field: `q` for the rationals or `f<p>` for a prime field.
    #[arg(long, global = true, default_value = "q", value_parser = GroundField::from_str)]
    field: GroundField,
    /// Truncation radius for universal covers.
    #[arg(long, global = true, default_value_t = 6)]
    radius: usize,
    /// Cap on enumerated paths per hom space.
    #[arg(long, global = true, default_value_t = wellbehaved::DEFAULT_PATH_CAP)]
    path_cap: usize,
    /// Skip the independent radical-membership cross-check.
    #[arg(long, global = true)]
    no_oracle: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a translation quiver file.
    CheckQuiver {
        file: PathBuf,
        /// Also print the quiver in DOT format.
        #[arg(long)]
        dot: bool,
    },
    /// Knit the AR component of a path algebra and export it.
    Knit { algfile: PathBuf, outdir: PathBuf },
    /// Build the truncated universal cover of a translation quiver.
    Cover {
        tqfile: PathBuf,
        base: String,
        outdir: PathBuf,
    },
    /// Print the radical filtration of a mesh-category hom space.
    MeshHom {
        coverdir: PathBuf,
        x: String,
        y: String,
    },
    /// Knit, cover, build the functor, and check the covering properties.
    VerifyCovering { algfile: PathBuf },
    /// Decide the radical degree of a composite along a component path.
    ComposeDegree { algfile: PathBuf, path_spec: String },
}

#[derive(Debug)]
enum Failure {
    /// A check failed; the report still goes to standard output.
    Domain(String),
    /// Input did not parse or arguments are unusable.
    Config(String),
}

type CmdResult = Result<String, Failure>;

pub fn run() -> i32 {
    let cli = Cli::try_parse().unwrap_or_else(|e| e.exit());
    match dispatch(&cli) {
        Ok(out) => {
            print!("{out}");
            0
        }
        Err(Failure::Domain(out)) => {
            print!("{out}");
            1
        }
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            2
        }
    }
}

fn dispatch(cli: &Cli) -> CmdResult {
    match cli.field {
        GroundField::Rationals => dispatch_field(cli, Rationals),
        GroundField::Prime(p) => {
            let f = PrimeField::new(p).map_err(Failure::Config)?;
            dispatch_field(cli, f)
        }
    }
}

fn dispatch_field<K: Field>(cli: &Cli, field: K) -> CmdResult {
    match &cli.command {
        Command::CheckQuiver { file, dot } => cmd_check_quiver(file, *dot),
        Command::Knit { algfile, outdir } => cmd_knit(field, algfile, outdir),
        Command::Cover {
            tqfile,
            base,
            outdir,
        } => cmd_cover(tqfile, base, cli.radius, outdir),
        Command::MeshHom { coverdir, x, y } => {
            cmd_mesh_hom(field, coverdir, x, y, cli.path_cap)
        }
        Command::VerifyCovering { algfile } => {
            cmd_verify_covering(field, algfile, cli.radius, cli.path_cap)
        }
        Command::ComposeDegree { algfile, path_spec } => cmd_compose_degree(
            field,
            algfile,
            path_spec,
            cli.radius,
            cli.path_cap,
            !cli.no_oracle,
        ),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::Config(format!("{}: {e}", path.display())))
}

fn write_file(dir: &Path, name: &str, content: &str) -> Result<(), Failure> {
    fs::write(dir.join(name), content)
        .map_err(|e| Failure::Config(format!("{}/{name}: {e}", dir.display())))
}

fn parse_tq(path: &Path) -> Result<tqfile::TqFile, Failure> {
    let text = read(path)?;
    tqfile::parse(&text).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))
}

fn parse_alg(path: &Path) -> Result<algfile::AlgebraSpec, Failure> {
    let text = read(path)?;
    algfile::parse(&text).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))
}

fn knit_component<K: Field>(
    spec: &algfile::AlgebraSpec,
    field: K,
) -> Result<Component<K>, Failure> {
    knit(spec, field).map_err(|e| Failure::Domain(format!("knit failed: {e}\n")))
}

fn identity_cover(
    comp_quiver: &TranslationQuiver,
    root: &str,
    radius: usize,
) -> Result<TruncatedCover, Failure> {
    universal_cover(comp_quiver, &VertexId::new(root), radius).map_err(|e| match e {
        CoverError::UnknownBaseVertex(v) => {
            Failure::Config(format!("no vertex `{v}` in the quiver"))
        }
        other => Failure::Domain(format!("cover failed: {other}\n")),
    })
}

fn render_dot(q: &TranslationQuiver) -> String {
    let mut s = String::from("digraph translation_quiver {\n");
    for v in q.vertices() {
        let mut attrs = Vec::new();
        if q.is_projective(v) {
            attrs.push("shape=box");
        }
        if q.is_injective(v) {
            attrs.push("peripheries=2");
        }
        if attrs.is_empty() {
            let _ = writeln!(s, "    \"{v}\";");
        } else {
            let _ = writeln!(s, "    \"{v}\" [{}];", attrs.join(", "));
        }
    }
    for (src, tgt) in q.arrows() {
        let _ = writeln!(s, "    \"{src}\" -> \"{tgt}\";");
    }
    for v in q.vertices() {
        if let Some(tv) = q.tau(v) {
            let _ = writeln!(s, "    \"{v}\" -> \"{tv}\" [style=dashed, label=\"tau\"];");
        }
    }
    s.push_str("}\n");
    s
}

fn cmd_check_quiver(path: &Path, dot: bool) -> CmdResult {
    let tq = parse_tq(path)?;
    let q = &tq.quiver;
    let mut out = String::new();
    let _ = writeln!(out, "vertices {}", q.vertices().count());
    let _ = writeln!(out, "arrows {}", q.arrows().count());
    let report = q.validate();
    let with_length = q.is_with_length();
    let mut ok = true;
    for v in &report.violations {
        ok = false;
        let _ = writeln!(out, "violation: {v}");
    }
    if let Err(w) = &with_length {
        ok = false;
        let _ = writeln!(
            out,
            "not with-length: path {} and path {} share endpoints",
            join_path(&w.path_a),
            join_path(&w.path_b)
        );
    } else {
        let _ = writeln!(out, "with-length true");
    }
    if !ok {
        out.push_str("invalid\n");
        return Err(Failure::Domain(out));
    }
    out.push_str("valid\n");
    if dot {
        out.push_str(&render_dot(q));
    }
    Ok(out)
}

fn join_path(p: &[VertexId]) -> String {
    p.iter()
        .map(|v| v.as_str())
        .collect::<Vec<_>>()
        .join(" > ")
}

fn cmd_knit<K: Field>(field: K, algpath: &Path, outdir: &Path) -> CmdResult {
    let spec = parse_alg(algpath)?;
    let comp = knit_component(&spec, field)?;
    fs::create_dir_all(outdir)
        .map_err(|e| Failure::Config(format!("{}: {e}", outdir.display())))?;

    write_file(outdir, "component.tq", &comp.export_tq())?;

    let mut modules = String::new();
    for (name, rep) in comp.modules() {
        let _ = writeln!(
            modules,
            "module {name} level {}",
            comp.level(name).expect("knitted module has a level")
        );
        let dims: Vec<String> = rep
            .dims()
            .iter()
            .map(|(v, d)| format!("{v}={d}"))
            .collect();
        let _ = writeln!(modules, "{name}.dims: {}", dims.join(" "));
        for arrow in spec.arrows.keys() {
            let _ = writeln!(
                modules,
                "{name}.{arrow}: {}",
                rep.arrow_mat(arrow).format_row_major()
            );
        }
    }
    write_file(outdir, "modules.txt", &modules)?;

    let mut morphisms = String::new();
    for (src, tgt) in comp.ar_quiver().arrows() {
        let m = comp
            .irr_morphism(src.as_str(), tgt.as_str())
            .expect("component arrow carries a morphism");
        let _ = writeln!(morphisms, "irr {src} -> {tgt}");
        morphisms.push_str(&wellbehaved::dump_morphism(
            &format!("{src}>{tgt}"),
            m,
        ));
    }
    write_file(outdir, "morphisms.txt", &morphisms)?;

    let mut out = String::new();
    let _ = writeln!(out, "modules {}", comp.modules().len());
    let _ = writeln!(out, "arrows {}", comp.ar_quiver().arrows().count());
    for (name, rep) in comp.modules() {
        let _ = writeln!(
            out,
            "module {name} level {} total-dim {}",
            comp.level(name).expect("knitted module has a level"),
            rep.total_dim()
        );
    }
    out.push_str("wrote component.tq modules.txt morphisms.txt\n");
    Ok(out)
}

fn cmd_cover(tqpath: &Path, base: &str, radius: usize, outdir: &Path) -> CmdResult {
    let tq = parse_tq(tqpath)?;
    let report = tq.quiver.validate();
    if !report.is_valid() {
        let mut out = String::new();
        for v in &report.violations {
            let _ = writeln!(out, "violation: {v}");
        }
        out.push_str("invalid base quiver\n");
        return Err(Failure::Domain(out));
    }
    let tc = identity_cover(&tq.quiver, base, radius)?;

    fs::create_dir_all(outdir)
        .map_err(|e| Failure::Config(format!("{}: {e}", outdir.display())))?;
    write_file(
        outdir,
        "cover.tq",
        &tqfile::serialize(&tc.cover, &BTreeMap::new()),
    )?;

    let mut meta = String::new();
    let _ = writeln!(meta, "base-vertex {base}");
    let _ = writeln!(meta, "root {}", tc.root);
    let _ = writeln!(meta, "radius {}", tc.radius);
    for v in tc.cover.vertices() {
        let _ = writeln!(
            meta,
            "vertex {v} -> {} dist {} length {} interior {}",
            tc.base_of(v).expect("cover vertex has a base"),
            tc.dist[v],
            tc.lengths[v],
            u8::from(tc.interior.contains(v))
        );
    }
    write_file(outdir, "cover.meta", &meta)?;

    let complete = tc.interior.len() == tc.cover.vertices().count();
    let mut out = String::new();
    let _ = writeln!(out, "cover vertices {}", tc.cover.vertices().count());
    let _ = writeln!(out, "cover arrows {}", tc.cover.arrows().count());
    let _ = writeln!(out, "radius {}", tc.radius);
    let _ = writeln!(out, "complete {complete}");
    out.push_str("wrote cover.tq cover.meta\n");
    Ok(out)
}

struct CoverMeta {
    radius: usize,
    dist: BTreeMap<VertexId, usize>,
    interior: BTreeSet<VertexId>,
}

fn parse_cover_meta(path: &Path) -> Result<CoverMeta, Failure> {
    let text = read(path)?;
    let bad = |line: usize, msg: &str| {
        Failure::Config(format!("{}: line {line}: {msg}", path.display()))
    };
    let mut radius = None;
    let mut dist = BTreeMap::new();
    let mut interior = BTreeSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        match tokens[0] {
            "base-vertex" | "root" => {}
            "radius" => {
                let r = tokens
                    .get(1)
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| bad(line, "radius needs a number"))?;
                radius = Some(r);
            }
            "vertex" => {
                if tokens.len() != 10
                    || tokens[2] != "->"
                    || tokens[4] != "dist"
                    || tokens[6] != "length"
                    || tokens[8] != "interior"
                {
                    return Err(bad(line, "expected `vertex V -> B dist D length L interior I`"));
                }
                let v = VertexId::new(tokens[1]);
                let d: usize = tokens[5]
                    .parse()
                    .map_err(|_| bad(line, "dist needs a number"))?;
                dist.insert(v.clone(), d);
                match tokens[9] {
                    "1" => {
                        interior.insert(v);
                    }
                    "0" => {}
                    _ => return Err(bad(line, "interior is 0 or 1")),
                }
            }
            other => return Err(bad(line, &format!("unknown directive `{other}`"))),
        }
    }
    let radius = radius.ok_or_else(|| bad(0, "missing `radius` line"))?;
    Ok(CoverMeta {
        radius,
        dist,
        interior,
    })
}

fn cmd_mesh_hom<K: Field>(
    field: K,
    coverdir: &Path,
    x: &str,
    y: &str,
    path_cap: usize,
) -> CmdResult {
    let tq = parse_tq(&coverdir.join("cover.tq"))?;
    let meta = parse_cover_meta(&coverdir.join("cover.meta"))?;
    for v in tq.quiver.vertices() {
        if !meta.dist.contains_key(v) {
            return Err(Failure::Config(format!(
                "cover.meta has no entry for vertex `{v}`"
            )));
        }
    }
    let modulation = SplitModulation::attach(field, &tq.quiver, &tq.dims, BTreeMap::new())
        .map_err(|e| Failure::Config(e.to_string()))?;
    let complete = meta.interior.len() == tq.quiver.vertices().count();
    let trunc = if complete {
        None
    } else {
        Some(TruncationInfo {
            dist: meta.dist.clone(),
            radius: meta.radius,
        })
    };
    let ctx = MeshCtx::new(&tq.quiver, &modulation, trunc, path_cap)
        .map_err(|e| Failure::Domain(format!("mesh category rejected the cover: {e}\n")))?;
    let (xv, yv) = (VertexId::new(x), VertexId::new(y));
    let mesh_err = |e: MeshError| match e {
        MeshError::UnknownVertex(_) => Failure::Config(e.to_string()),
        other => Failure::Domain(format!("{other}\n")),
    };
    let hom = ctx.hom_basis(&xv, &yv).map_err(mesh_err)?;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "hom {x} {y}: dim {} ambient {} relations {}",
        hom.basis.len(),
        hom.ambient.len(),
        hom.relations_dim
    );
    let mut n = 0;
    loop {
        let rp = ctx.radical_power(&xv, &yv, n).map_err(mesh_err)?;
        // hom_dim counts modulo the mesh relations; rp.space is the
        // ambient preimage and never shrinks below the relation space.
        let d = rp.hom_dim;
        let _ = writeln!(out, "rad^{n} dim {d}");
        if d == 0 {
            break;
        }
        n += 1;
    }
    Ok(out)
}

fn undecidable_reason(e: &WbError) -> Option<String> {
    match e {
        WbError::UndecidableTruncation {
            base,
            radius,
            needed_radius,
        } => Some(format!(
            "target {base} needs radius {needed_radius}, have {radius}"
        )),
        WbError::Mesh(MeshError::UndecidableTruncation {
            from,
            to,
            needed_radius,
        }) => Some(format!(
            "hom {from} -> {to} needs radius {needed_radius}"
        )),
        _ => None,
    }
}

fn cmd_verify_covering<K: Field>(
    field: K,
    algpath: &Path,
    radius: usize,
    path_cap: usize,
) -> CmdResult {
    let spec = parse_alg(algpath)?;
    let comp = knit_component(&spec, field)?;
    let mut out = String::new();
    let _ = writeln!(out, "modules {}", comp.modules().len());

    if let Err(e) = comp.verify_component() {
        let _ = writeln!(out, "component check failed: {e}");
        out.push_str("verify-covering FAILED\n");
        return Err(Failure::Domain(out));
    }
    let root = comp.modules().keys().next().expect("component is nonempty");
    let tc = identity_cover(comp.ar_quiver(), root, radius)?;
    let complete = tc.interior.len() == tc.cover.vertices().count();
    let _ = writeln!(
        out,
        "cover vertices {} radius {radius} complete {complete}",
        tc.cover.vertices().count()
    );

    let domain = |mut out: String, msg: String| {
        let _ = writeln!(out, "{msg}");
        out.push_str("verify-covering FAILED\n");
        Failure::Domain(out)
    };
    let fb = match build_well_behaved(&tc, &comp) {
        Ok(fb) => fb,
        Err(e) => return Err(domain(out, format!("functor build failed: {e}"))),
    };
    if let Err(e) = fb.verify_well_behaved() {
        return Err(domain(out, format!("well-behaved check failed: {e}")));
    }
    out.push_str("well-behaved ok\n");
    let ctx = match fb.mesh_ctx(path_cap) {
        Ok(c) => c,
        Err(e) => return Err(domain(out, format!("mesh category failed: {e}"))),
    };

    let gen_std = match check_generalized_standard(&comp) {
        Ok(b) => b,
        Err(e) => return Err(domain(out, format!("radical chain failed: {e}"))),
    };
    let _ = writeln!(out, "generalized-standard {gen_std}");

    let levels = comp.levels();
    let span = (levels.values().max().copied().unwrap_or(0)
        - levels.values().min().copied().unwrap_or(0)) as usize;
    let nmax = span + 1;

    let names: Vec<String> = comp.modules().keys().cloned().collect();
    let cover_vertices: Vec<VertexId> = tc.cover.vertices().cloned().collect();
    let mut verified = 0usize;
    let mut undecidable = 0usize;
    let mut failed = 0usize;
    for xv in &cover_vertices {
        'pair: for y in &names {
            let inj = match verify_injectivity(&fb, &ctx, xv, y) {
                Ok(r) => r,
                Err(e) => {
                    if let Some(reason) = undecidable_reason(&e) {
                        undecidable += 1;
                        let _ = writeln!(out, "pair {xv} {y}: undecidable ({reason})");
                        continue 'pair;
                    }
                    return Err(domain(out, format!("pair {xv} {y}: {e}")));
                }
            };
            for n in 0..=nmax {
                let rep = match verify_graded_covering(&fb, &ctx, xv, y, n) {
                    Ok(r) => r,
                    Err(e) => {
                        if let Some(reason) = undecidable_reason(&e) {
                            undecidable += 1;
                            let _ = writeln!(out, "pair {xv} {y}: undecidable ({reason})");
                            continue 'pair;
                        }
                        return Err(domain(out, format!("pair {xv} {y} n={n}: {e}")));
                    }
                };
                if !rep.bijective() {
                    failed += 1;
                    let _ = writeln!(
                        out,
                        "pair {xv} {y}: FAIL graded n={n} covariant {}/{}/{} contravariant {}/{}/{}",
                        rep.covariant.left_dim,
                        rep.covariant.rank,
                        rep.covariant.right_dim,
                        rep.contravariant.left_dim,
                        rep.contravariant.rank,
                        rep.contravariant.right_dim
                    );
                    continue 'pair;
                }
            }
            if !inj.injective() {
                failed += 1;
                let _ = writeln!(
                    out,
                    "pair {xv} {y}: FAIL hom injectivity covariant {}/{}/{} contravariant {}/{}/{}",
                    inj.covariant.left_dim,
                    inj.covariant.rank,
                    inj.covariant.right_dim,
                    inj.contravariant.left_dim,
                    inj.contravariant.rank,
                    inj.contravariant.right_dim
                );
                continue 'pair;
            }
            verified += 1;
            let _ = writeln!(
                out,
                "pair {xv} {y}: ok graded n<={nmax} hom {}->{} rank {} surjective {}",
                inj.covariant.left_dim,
                inj.covariant.right_dim,
                inj.covariant.rank,
                inj.covariant.surjective() && inj.contravariant.surjective()
            );
        }
    }
    let _ = writeln!(
        out,
        "pairs verified {verified} undecidable {undecidable} failed {failed}"
    );
    if failed == 0 && gen_std {
        out.push_str("verify-covering VERIFIED\n");
        Ok(out)
    } else {
        out.push_str("verify-covering FAILED\n");
        Err(Failure::Domain(out))
    }
}

/// Parses a component path spec `X1 > X2 > ... [perturb i]` into the
/// vertex sequence and the optional 1-based perturbed step.
pub fn parse_path_spec(s: &str) -> Result<(Vec<String>, Option<usize>), String> {
    let (path_part, perturb) = match s.rsplit_once("perturb") {
        Some((p, idx)) => {
            let i: usize = idx
                .trim()
                .parse()
                .map_err(|_| format!("bad perturb index `{}`", idx.trim()))?;
            if i == 0 {
                return Err("perturb index is 1-based".to_string());
            }
            (p, Some(i))
        }
        None => (s, None),
    };
    let vertices: Vec<String> = path_part
        .split('>')
        .map(|t| t.trim().to_string())
        .collect();
    if vertices.len() < 2 || vertices.iter().any(String::is_empty) {
        return Err("path needs at least two `>`-separated vertices".to_string());
    }
    if let Some(i) = perturb {
        if i > vertices.len() - 1 {
            return Err(format!(
                "perturb index {i} exceeds the {} steps of the path",
                vertices.len() - 1
            ));
        }
    }
    Ok((vertices, perturb))
}

fn cmd_compose_degree<K: Field>(
    field: K,
    algpath: &Path,
    path_spec: &str,
    radius: usize,
    path_cap: usize,
    oracle: bool,
) -> CmdResult {
    let (vertices, perturb) = parse_path_spec(path_spec).map_err(Failure::Config)?;
    let spec = parse_alg(algpath)?;
    let comp = knit_component(&spec, field.clone())?;
    let root = comp.modules().keys().next().expect("component is nonempty");
    let tc = identity_cover(comp.ar_quiver(), root, radius)?;

    let mut out = String::new();
    let _ = writeln!(out, "path {}", vertices.join(" > "));
    let domain = |mut out: String, msg: String| {
        let _ = writeln!(out, "{msg}");
        Failure::Domain(out)
    };

    let fb = match build_well_behaved(&tc, &comp) {
        Ok(fb) => fb,
        Err(e) => return Err(domain(out, format!("functor build failed: {e}"))),
    };
    let ctx = match fb.mesh_ctx(path_cap) {
        Ok(c) => c,
        Err(e) => return Err(domain(out, format!("mesh category failed: {e}"))),
    };

    let mut morphs = Vec::new();
    for w in vertices.windows(2) {
        match comp.irr_morphism(&w[0], &w[1]) {
            Some(m) => morphs.push(m.clone()),
            None => {
                return Err(domain(
                    out,
                    format!("no irreducible morphism {} -> {}", w[0], w[1]),
                ))
            }
        }
    }
    if let Some(i) = perturb {
        let (src, tgt) = (&vertices[i - 1], &vertices[i]);
        match comp.rad_square_perturbation(src, tgt) {
            Ok(None) => {
                let _ = writeln!(
                    out,
                    "perturb {i}: radical square of {src} -> {tgt} is zero, step unchanged"
                );
            }
            Ok(Some(delta)) => {
                morphs[i - 1] = morphs[i - 1].add(&delta);
                let _ = writeln!(
                    out,
                    "perturb {i}: added the first radical-square basis element on {src} -> {tgt}"
                );
            }
            Err(e) => return Err(domain(out, format!("radical square failed: {e}"))),
        }
    }

    let verts: Vec<&str> = vertices.iter().map(String::as_str).collect();
    let verdict = match composite_degree(&fb, &ctx, &verts, &morphs, oracle) {
        Ok(v) => v,
        Err(e) => return Err(domain(out, format!("compose-degree failed: {e}"))),
    };
    out.push_str(&verdict.render());
    if oracle {
        out.push_str("oracle agrees\n");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_specs_parse_and_validate() {
        let (v, p) = parse_path_spec("a > b > c").unwrap();
        assert_eq!(v, vec!["a", "b", "c"]);
        assert_eq!(p, None);
        let (v, p) = parse_path_spec("a > b perturb 1").unwrap();
        assert_eq!(v, vec!["a", "b"]);
        assert_eq!(p, Some(1));
        assert!(parse_path_spec("a").is_err());
        assert!(parse_path_spec("a > ").is_err());
        assert!(parse_path_spec("a > b perturb 0").is_err());
        assert!(parse_path_spec("a > b perturb 2").is_err());
        assert!(parse_path_spec("a > b perturb x").is_err());
    }

    #[test]
    fn meta_round_trips_through_the_parser() {
        let dir = std::env::temp_dir().join("arq-meta-test");
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("cover.meta");
        fs::write(
            &path,
            "base-vertex a\nroot a~0\nradius 3\nvertex a~0 -> a dist 0 length 0 interior 1\nvertex b~0 -> b dist 1 length 1 interior 0\n",
        )
        .unwrap();
        let meta = parse_cover_meta(&path).unwrap();
        assert_eq!(meta.radius, 3);
        assert_eq!(meta.dist[&VertexId::new("a~0")], 0);
        assert_eq!(meta.dist[&VertexId::new("b~0")], 1);
        assert!(meta.interior.contains(&VertexId::new("a~0")));
        assert!(!meta.interior.contains(&VertexId::new("b~0")));
        fs::remove_dir_all(&dir).unwrap();
    }
}
