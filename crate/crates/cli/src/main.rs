use std::fs;
use std::io::{self, Read, Write};
use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use pegkit::board::SymmetryType;
use pegkit::catalog::{self, report, CensusRow, Puzzle};
use pegkit::class;
use pegkit::levelset::{self, LevelStore, RunConfig};
use pegkit::solver::{enumerate_template, Keying, Solver, Target, Template};
use pegkit::{Board, BoardId, ClassName, Error, Result};

#[derive(Debug, Parser)]
#[command(name = "pegkit", version, about = "Peg solitaire analysis engine")]
struct Cli {
    /// Worker threads (default: available cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build or resume the backward level sets for one board and class.
    Run(RunArgs),
    /// Count solvable symmetric positions by symmetry type.
    Census(CensusArgs),
    /// Count complement pairs among solvable symmetric positions.
    Pairs(PairsArgs),
    /// Solve a single position.
    Solve(SolveArgs),
    /// Unique-winning-jump table and puzzle export.
    Unique(UniqueArgs),
    /// Start the HTTP service.
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
struct RunArgs {
    #[arg(long)]
    board: BoardId,
    #[arg(long)]
    class: ClassName,
    #[arg(long)]
    max_level: Option<usize>,
    /// Bytes held in memory before spilling, with optional K/M/G suffix.
    #[arg(long, default_value = "1G", value_parser = parse_bytes)]
    memory_budget: usize,
    #[arg(long, default_value_t = 1)]
    partitions: usize,
    /// Store directory (default: `$PEGKIT_STORE/<board>-<class>`).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, env = "PEGKIT_STORE", hide_env_values = true)]
    store_root: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CensusMethod {
    /// Scan completed level-set stores.
    Levels,
    /// Sweep every filling of a rotation template with the forward search.
    Template,
}

#[derive(Debug, Args)]
struct CensusArgs {
    /// Store directories; default: every store for `--board` under `$PEGKIT_STORE`.
    #[arg(long = "store")]
    stores: Vec<PathBuf>,
    #[arg(long)]
    board: Option<BoardId>,
    /// Symmetry types, e.g. `1-7` or `1,2,5`.
    #[arg(long, value_parser = parse_types)]
    types: Option<TypeList>,
    /// Only report rows of this class.
    #[arg(long)]
    class: Option<ClassName>,
    #[arg(long, value_enum, default_value = "levels")]
    method: CensusMethod,
    /// Rotation angle of the template.
    #[arg(long, default_value_t = 120)]
    degrees: u16,
    /// Drop positions solvable in this store after embedding into its board.
    #[arg(long)]
    exclude: Option<PathBuf>,
    #[arg(long, env = "PEGKIT_STORE", hide_env_values = true)]
    store_root: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PairsArgs {
    #[arg(long)]
    store: PathBuf,
    #[arg(long, value_parser = parse_types)]
    types: Option<TypeList>,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("input").required(true).args(["ascii", "ascii_file", "holes"])))]
struct SolveArgs {
    #[arg(long)]
    board: BoardId,
    /// Position as an ASCII grid (`o` peg, `.` empty).
    #[arg(long)]
    ascii: Option<String>,
    /// File holding an ASCII grid; `-` reads stdin.
    #[arg(long)]
    ascii_file: Option<PathBuf>,
    /// Comma-separated peg hole indices.
    #[arg(long, value_delimiter = ',')]
    holes: Option<Vec<usize>>,
    /// `any`, `centre`, or comma-separated hole indices.
    #[arg(long, default_value = "any")]
    target: String,
    /// Give up after this many seconds.
    #[arg(long)]
    timeout: Option<f64>,
}

#[derive(Debug, Args)]
struct UniqueArgs {
    #[arg(long)]
    store: PathBuf,
    /// Write one puzzle JSON per counted position here.
    #[arg(long)]
    export: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ServeArgs {
    #[arg(long, default_value_t = 8080)]
    port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    host: IpAddr,
    #[arg(long, env = "PEGKIT_STORE", hide_env_values = true)]
    store_dir: Option<PathBuf>,
    #[arg(long)]
    puzzle_dir: Option<PathBuf>,
    #[arg(long, default_value_t = 2000)]
    oracle_budget_ms: u64,
}

fn parse_bytes(s: &str) -> std::result::Result<usize, String> {
    let s = s.trim();
    let (digits, scale) = match s.chars().last().map(|c| c.to_ascii_uppercase()) {
        Some('K') => (&s[..s.len() - 1], 1usize << 10),
        Some('M') => (&s[..s.len() - 1], 1 << 20),
        Some('G') => (&s[..s.len() - 1], 1 << 30),
        _ => (s, 1),
    };
    digits
        .parse::<usize>()
        .ok()
        .and_then(|n| n.checked_mul(scale))
        .ok_or_else(|| format!("bad byte count `{s}`"))
}

/// Symmetry type ids from `--types`.
#[derive(Clone, Debug)]
struct TypeList(Vec<u8>);

fn parse_types(s: &str) -> std::result::Result<TypeList, String> {
    let mut out = Vec::new();
    for part in s.split(',') {
        let bad = || format!("bad type list `{s}`");
        match part.split_once('-') {
            Some((a, b)) => {
                let (a, b): (u8, u8) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
                out.extend(a..=b);
            }
            None => out.push(part.trim().parse().map_err(|_| bad())?),
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(TypeList(out))
}

fn store_root(root: Option<&Path>) -> Result<&Path> {
    root.ok_or_else(|| Error::Config("no store directory given and PEGKIT_STORE is unset".into()))
}

fn cmd_run(args: RunArgs, out: &mut impl Write) -> Result<()> {
    let dir = match args.out {
        Some(d) => d,
        None => store_root(args.store_root.as_deref())?.join(format!("{}-{}", args.board, args.class)),
    };
    let cfg = RunConfig {
        board: args.board,
        class: args.class,
        max_level: args.max_level,
        memory_budget: args.memory_budget,
        partitions: args.partitions,
        dir,
    };
    let mut failed = None;
    let store = levelset::run_with_progress(&cfg, |meta| {
        if let Err(e) = writeln!(out, "{} {}", meta.n, meta.count) {
            failed.get_or_insert(e);
        }
    })?;
    if let Some(e) = failed {
        return Err(e.into());
    }
    let m = store.manifest();
    if let Some(peak) = m.peak() {
        writeln!(
            out,
            "# {} class {}: {} levels, peak {} at level {}, {}",
            m.board,
            m.class,
            m.levels.len(),
            peak.count,
            peak.n,
            if m.exhausted { "complete" } else { "truncated" }
        )?;
    }
    Ok(())
}

fn open_stores(args: &CensusArgs) -> Result<Vec<LevelStore>> {
    let dirs = if args.stores.is_empty() {
        let board = args
            .board
            .ok_or_else(|| Error::Config("census needs --store or --board".into()))?;
        let root = store_root(args.store_root.as_deref())?;
        let mut dirs = Vec::new();
        for e in fs::read_dir(root)? {
            let path = e?.path();
            if path.join(levelset::MANIFEST).is_file() && levelset::Manifest::load(&path)?.board == board {
                dirs.push(path);
            }
        }
        dirs.sort();
        dirs
    } else {
        args.stores.clone()
    };
    dirs.iter().map(|d| LevelStore::open(d)).collect()
}

fn cmd_census(args: CensusArgs, out: &mut impl Write) -> Result<()> {
    let (lattice, mut rows) = match args.method {
        CensusMethod::Template => {
            let board = Board::new(
                args.board
                    .ok_or_else(|| Error::Config("template census needs --board".into()))?,
            );
            let template = Template::rotation_representatives(&board, args.degrees)?;
            (board.lattice(), enumerate_template(&board, &template)?.rows)
        }
        CensusMethod::Levels => {
            let stores = open_stores(&args)?;
            let exclude = args.exclude.as_deref().map(LevelStore::open).transpose()?;
            let Some(first) = stores.first() else {
                return Err(Error::Config("no stores found".into()));
            };
            let lattice = first.board().lattice();
            if let Some(s) = stores.iter().find(|s| s.board().id() != first.board().id()) {
                return Err(Error::StoreMismatch(format!("{} mixed with {}", s.board().id(), first.board().id())));
            }
            let types: Vec<u8> = match &args.types {
                Some(t) => t.0.clone(),
                None => SymmetryType::all(lattice).iter().map(|t| t.id).collect(),
            };
            let mut rows: Vec<CensusRow> = Vec::new();
            for s in &stores {
                rows.extend(catalog::symmetry_census(s, &types, exclude.as_ref())?);
            }
            (lattice, rows)
        }
    };
    if let Some(t) = &args.types {
        rows.retain(|r| t.0.contains(&r.type_id));
    }
    if let Some(c) = args.class {
        rows.retain(|r| r.class == c);
    }
    rows.sort_by_key(|r| (r.type_id, r.class));
    out.write_all(report::census_csv(lattice, &rows).as_bytes())?;
    Ok(())
}

fn cmd_pairs(args: PairsArgs, out: &mut impl Write) -> Result<()> {
    let store = LevelStore::open(&args.store)?;
    let types = args
        .types
        .map(|t| t.0)
        .unwrap_or_else(|| SymmetryType::all(store.board().lattice()).iter().map(|t| t.id).collect());
    let rows = types
        .iter()
        .map(|&t| catalog::complement_pair_check(&store, t))
        .collect::<Result<Vec<_>>>()?;
    out.write_all(report::pairs_csv(&rows).as_bytes())?;
    Ok(())
}

fn cmd_solve(args: SolveArgs, out: &mut impl Write) -> Result<()> {
    let board = Board::new(args.board);
    let p = if let Some(text) = &args.ascii {
        board.parse_ascii(text)?
    } else if let Some(path) = &args.ascii_file {
        let mut text = String::new();
        if path.as_os_str() == "-" {
            io::stdin().read_to_string(&mut text)?;
        } else {
            text = fs::read_to_string(path)?;
        }
        board.parse_ascii(&text)?
    } else {
        board.position_from_holes(args.holes.as_deref().unwrap_or_default())?
    };
    let target = match args.target.as_str() {
        "any" => Target::AnyHole,
        "centre" | "center" => Target::holes(&[board
            .centre()
            .ok_or_else(|| Error::Config(format!("{} has no centre hole", board.id())))?]),
        list => {
            let holes = list
                .split(',')
                .map(|h| h.trim().parse::<usize>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| Error::Config(format!("bad target `{list}`")))?;
            if let Some(&h) = holes.iter().find(|&&h| h >= board.hole_count()) {
                return Err(Error::HoleOutOfRange(h));
            }
            Target::holes(&holes)
        }
    };
    let named = class::position_class(&board, p);
    writeln!(out, "class {} {}", named.name, named.vector)?;
    let keying = match target {
        Target::AnyHole => Keying::Canonical,
        Target::Holes(_) => Keying::Raw,
    };
    let mut solver = Solver::with_keying(&board, keying);
    let solution = match args.timeout {
        Some(secs) => solver.solve_within(p, target, Duration::from_secs_f64(secs.max(0.0)))?,
        None => solver.solve(p, target),
    };
    match solution {
        Some(sol) => {
            writeln!(out, "solvable in {} jumps", sol.jumps.len())?;
            let mut q = p;
            for (i, &j) in sol.jumps.iter().enumerate() {
                let jump = board.jumps()[j];
                writeln!(out, "{:>2}. {} {} {}", i + 1, jump.from, jump.over, jump.to)?;
                q = board.apply_jump(q, j)?;
            }
            writeln!(out, "final hole {}", sol.final_hole)?;
            writeln!(out, "{}", board.render_ascii(q))?;
        }
        None => {
            let reason = if class::finishing_holes_of(&board, named.vector).is_empty() {
                format!("class {} {} has no finishing hole", named.name, named.vector)
            } else {
                format!("no jump sequence reaches the target from this class {} position", named.name)
            };
            writeln!(out, "unsolvable: {reason}")?;
        }
    }
    Ok(())
}

fn cmd_unique(args: UniqueArgs, out: &mut impl Write) -> Result<()> {
    let store = LevelStore::open(&args.store)?;
    let rows = catalog::unique_jump_census(&store)?;
    out.write_all(report::unique_csv(&rows).as_bytes())?;
    if let Some(dir) = args.export {
        let mut puzzles = Vec::new();
        for r in &rows {
            let source = format!("unique-n{:02}", r.n);
            for &p in &r.examples {
                puzzles.push(Puzzle::from_position(&store, p, &source, true)?);
            }
        }
        let paths = catalog::export_puzzles(&puzzles, &dir)?;
        eprintln!("exported {} puzzles to {}", paths.len(), dir.display());
    }
    Ok(())
}

fn cmd_serve(args: ServeArgs) -> Result<()> {
    let state = pegkit_service::AppState::load(
        args.store_dir.as_deref(),
        args.puzzle_dir.as_deref(),
        Duration::from_millis(args.oracle_budget_ms),
    )?;
    let rt = tokio::runtime::Builder::new_multi_thread().enable_all().build()?;
    rt.block_on(pegkit_service::serve(SocketAddr::new(args.host, args.port), state))?;
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: config: {e}");
            return ExitCode::from(2);
        }
    }
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let result = match cli.command {
        Command::Run(a) => cmd_run(a, &mut out),
        Command::Census(a) => cmd_census(a, &mut out),
        Command::Pairs(a) => cmd_pairs(a, &mut out),
        Command::Solve(a) => cmd_solve(a, &mut out),
        Command::Unique(a) => cmd_unique(a, &mut out),
        Command::Serve(a) => cmd_serve(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {}: {}", e.kind(), e.to_string().replace('\n', " "));
            ExitCode::from(1)
        }
    }
}
