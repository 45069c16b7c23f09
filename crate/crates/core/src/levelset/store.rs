use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use log::info;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::file::{self, LevelFile, LevelWriter, RunReader};
use super::{bucket_of, seed_holes, seeds_from_holes, LevelSet};
use crate::board::{Board, BoardId, Position};
use crate::class::{self, ClassName};
use crate::error::{Error, Result};

pub const MANIFEST: &str = "manifest.json";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelMeta {
    pub n: usize,
    pub count: u64,
    pub checksum: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub board: BoardId,
    pub class: ClassName,
    pub seed_holes: Vec<usize>,
    pub levels: Vec<LevelMeta>,
    /// True once a level came out empty: every nonempty level is present.
    pub exhausted: bool,
}

impl Manifest {
    pub fn load(dir: &Path) -> Result<Manifest> {
        Ok(serde_json::from_slice(&fs::read(dir.join(MANIFEST))?)?)
    }

    fn save(&self, dir: &Path) -> Result<()> {
        let tmp = dir.join(format!("{MANIFEST}.tmp"));
        fs::write(&tmp, serde_json::to_vec_pretty(self)?)?;
        fs::rename(tmp, dir.join(MANIFEST))?;
        Ok(())
    }

    pub fn last_level(&self) -> usize {
        self.levels.last().map_or(0, |l| l.n)
    }

    pub fn peak(&self) -> Option<&LevelMeta> {
        self.levels.iter().max_by_key(|l| l.count)
    }
}

pub fn level_path(dir: &Path, n: usize) -> PathBuf {
    dir.join(format!("level-{n:02}.pslv"))
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub board: BoardId,
    pub class: ClassName,
    pub max_level: Option<usize>,
    /// Bytes of child codes held in memory before spilling a sorted run.
    pub memory_budget: usize,
    pub partitions: usize,
    pub dir: PathBuf,
}

impl RunConfig {
    pub fn new(board: BoardId, class: ClassName, dir: impl Into<PathBuf>) -> Self {
        RunConfig {
            board,
            class,
            max_level: None,
            memory_budget: 1 << 30,
            partitions: 1,
            dir: dir.into(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.memory_budget == 0 {
            return Err(Error::Config("memory budget must be positive".into()));
        }
        if self.partitions == 0 {
            return Err(Error::Config("partition count must be at least 1".into()));
        }
        if self.max_level == Some(0) {
            return Err(Error::Config("max level must be at least 1".into()));
        }
        Ok(())
    }
}

/// Builds (or resumes) the level store described by `cfg`.
pub fn run(cfg: &RunConfig) -> Result<LevelStore> {
    run_with_progress(cfg, |_| {})
}

pub fn run_with_progress(cfg: &RunConfig, mut progress: impl FnMut(&LevelMeta)) -> Result<LevelStore> {
    cfg.validate()?;
    let board = Board::new(cfg.board);
    let family = class::class_family(&board, cfg.class);
    let holes = seed_holes(&board, cfg.class)?;
    fs::create_dir_all(&cfg.dir)?;

    let mut manifest = if cfg.dir.join(MANIFEST).exists() {
        let m = Manifest::load(&cfg.dir)?;
        if m.board != cfg.board || m.class != family || m.seed_holes != holes {
            return Err(Error::StoreMismatch(format!(
                "{} holds {} class {}, asked for {} class {}",
                cfg.dir.display(),
                m.board,
                m.class,
                cfg.board,
                family
            )));
        }
        verify_levels(&cfg.dir, &m)?;
        info!("resuming {} class {} after level {}", m.board, m.class, m.last_level());
        m
    } else {
        Manifest {
            board: cfg.board,
            class: family,
            seed_holes: holes.clone(),
            levels: Vec::new(),
            exhausted: false,
        }
    };

    if manifest.levels.is_empty() {
        let b1 = seeds_from_holes(&board, cfg.class, &holes);
        let (count, checksum) = file::write_level(&level_path(&cfg.dir, 1), cfg.board, family, 1, &b1.codes)?;
        let meta = LevelMeta { n: 1, count, checksum };
        progress(&meta);
        manifest.levels.push(meta);
        manifest.save(&cfg.dir)?;
    }

    let tmp = cfg.dir.join("tmp");
    while !manifest.exhausted && cfg.max_level.map_or(true, |m| manifest.last_level() < m) {
        let n = manifest.last_level();
        let parents = LevelFile::open(&level_path(&cfg.dir, n))?;
        let out = level_path(&cfg.dir, n + 1);
        fs::create_dir_all(&tmp)?;
        let (count, checksum) = expand_external(&board, family, &parents, n as u32 + 1, cfg, &tmp, &out)?;
        if count == 0 {
            fs::remove_file(&out)?;
            manifest.exhausted = true;
        } else {
            let meta = LevelMeta {
                n: n + 1,
                count,
                checksum,
            };
            info!("{} class {} level {}: {}", cfg.board, family, n + 1, count);
            progress(&meta);
            manifest.levels.push(meta);
        }
        manifest.save(&cfg.dir)?;
    }
    let _ = fs::remove_dir_all(&tmp);
    LevelStore::open(&cfg.dir)
}

fn verify_levels(dir: &Path, m: &Manifest) -> Result<()> {
    for (i, meta) in m.levels.iter().enumerate() {
        let path = level_path(dir, meta.n);
        if meta.n != i + 1 {
            return Err(Error::StoreMismatch(format!("manifest skips level {}", i + 1)));
        }
        let f = LevelFile::open(&path)?;
        if f.header.count != meta.count || f.checksum() != meta.checksum {
            return Err(Error::ChecksumMismatch { path });
        }
    }
    Ok(())
}

/// Expands `parents` into the level file `out`.
///
/// Children are split into hash buckets; each bucket is generated in one scan
/// over the parents, sorted and deduplicated in memory, spilling sorted runs
/// whenever the buffer passes the memory budget, and the runs are merged.
/// The buckets are then merged into the final ascending level.
fn expand_external(
    board: &Board,
    class: ClassName,
    parents: &LevelFile,
    level: u32,
    cfg: &RunConfig,
    tmp: &Path,
    out: &Path,
) -> Result<(u64, String)> {
    let parts = cfg.partitions;
    let cap = (cfg.memory_budget / 8).max(1 << 12);
    let codes = parents.codes();
    let mut bucket_files = Vec::new();
    let mut single: Option<Vec<u64>> = None;
    for bucket in 0..parts {
        let mut runs: Vec<PathBuf> = Vec::new();
        let mut buf: Vec<u64> = Vec::new();
        for block in codes.chunks(1 << 16) {
            let children: Vec<Vec<u64>> = block
                .par_chunks(2048)
                .map(|chunk| {
                    let mut v = Vec::with_capacity(chunk.len() * 8);
                    for &p in chunk {
                        for c in board.children(p) {
                            let m = board.mincode(c);
                            if parts == 1 || bucket_of(m, parts) == bucket {
                                v.push(m);
                            }
                        }
                    }
                    v.sort_unstable();
                    v.dedup();
                    v
                })
                .collect();
            for v in children {
                buf.extend_from_slice(&v);
                if buf.len() >= cap {
                    buf.par_sort_unstable();
                    buf.dedup();
                    if buf.len() >= cap / 2 {
                        let path = tmp.join(format!("run-{level}-{bucket}-{}.bin", runs.len()));
                        file::write_run(&path, &buf)?;
                        runs.push(path);
                        buf.clear();
                    }
                }
            }
        }
        buf.par_sort_unstable();
        buf.dedup();
        if runs.is_empty() && parts == 1 {
            single = Some(buf);
            break;
        }
        let path = tmp.join(format!("bucket-{level}-{bucket}.bin"));
        if runs.is_empty() {
            file::write_run(&path, &buf)?;
        } else {
            let mut w = BufWriter::with_capacity(1 << 20, fs::File::create(&path)?);
            let mut sources: Vec<Box<dyn Iterator<Item = u64>>> = Vec::new();
            for r in &runs {
                sources.push(Box::new(RunReader::open(r)?));
            }
            sources.push(Box::new(std::mem::take(&mut buf).into_iter()));
            merge_unique(sources, |c| Ok(w.write_all(&c.to_le_bytes())?))?;
            w.flush()?;
            for r in runs {
                fs::remove_file(r)?;
            }
        }
        bucket_files.push(path);
    }

    let mut writer = LevelWriter::create(out, board.id(), class, level)?;
    if let Some(codes) = single {
        for c in codes {
            writer.push(c)?;
        }
    } else {
        let mut sources: Vec<Box<dyn Iterator<Item = u64>>> = Vec::new();
        for p in &bucket_files {
            sources.push(Box::new(RunReader::open(p)?));
        }
        merge_unique(sources, |c| writer.push(c))?;
        for p in bucket_files {
            fs::remove_file(p)?;
        }
    }
    writer.finish()
}

/// K-way merge of ascending sources, emitting each value once.
fn merge_unique(
    mut sources: Vec<Box<dyn Iterator<Item = u64>>>,
    mut emit: impl FnMut(u64) -> Result<()>,
) -> Result<()> {
    let mut heap = BinaryHeap::new();
    for (i, s) in sources.iter_mut().enumerate() {
        if let Some(v) = s.next() {
            heap.push(Reverse((v, i)));
        }
    }
    let mut last = None;
    while let Some(Reverse((v, i))) = heap.pop() {
        if last != Some(v) {
            emit(v)?;
            last = Some(v);
        }
        if let Some(next) = sources[i].next() {
            heap.push(Reverse((next, i)));
        }
    }
    Ok(())
}

/// A completed (or truncated) run on disk, memory mapped for queries.
pub struct LevelStore {
    dir: PathBuf,
    board: Board,
    manifest: Manifest,
    levels: Vec<LevelFile>,
}

impl LevelStore {
    pub fn open(dir: &Path) -> Result<LevelStore> {
        let manifest = Manifest::load(dir)?;
        let board = Board::new(manifest.board);
        let mut levels = Vec::with_capacity(manifest.levels.len());
        for meta in &manifest.levels {
            let f = LevelFile::open(&level_path(dir, meta.n))?;
            if f.header.count != meta.count || f.header.board != manifest.board {
                return Err(Error::StoreMismatch(format!("level {} disagrees with manifest", meta.n)));
            }
            levels.push(f);
        }
        Ok(LevelStore {
            dir: dir.to_path_buf(),
            board,
            manifest,
            levels,
        })
    }

    /// Recomputes every level checksum against the manifest.
    pub fn verify(&self) -> Result<()> {
        verify_levels(&self.dir, &self.manifest)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn board(&self) -> &Board {
        &self.board
    }

    pub fn class(&self) -> ClassName {
        self.manifest.class
    }

    pub fn manifest(&self) -> &Manifest {
        &self.manifest
    }

    pub fn is_complete(&self) -> bool {
        self.manifest.exhausted
    }

    pub fn max_level(&self) -> usize {
        self.manifest.last_level()
    }

    pub fn levels(&self) -> impl Iterator<Item = (usize, &LevelFile)> {
        self.levels.iter().enumerate().map(|(i, f)| (i + 1, f))
    }

    /// Level `n`, or `None` when the run showed it is empty.
    pub fn level(&self, n: usize) -> Result<Option<&LevelFile>> {
        if n >= 1 && n <= self.levels.len() {
            Ok(Some(&self.levels[n - 1]))
        } else if n >= 1 && self.manifest.exhausted {
            Ok(None)
        } else {
            Err(Error::MissingLevel(n))
        }
    }

    pub fn level_set(&self, n: usize) -> Result<LevelSet> {
        let codes = match self.level(n)? {
            Some(f) => f.codes().into_owned(),
            None => Vec::new(),
        };
        Ok(LevelSet {
            board: self.manifest.board,
            class: self.manifest.class,
            n,
            codes,
        })
    }

    /// True when `p` can be played down to one peg on a finishing hole of
    /// this store's class family.
    pub fn is_solvable(&self, p: Position) -> Result<bool> {
        let n = p.peg_count() as usize;
        if n == 0 || n >= self.board.hole_count() {
            return Ok(false);
        }
        let named = class::position_class(&self.board, p);
        if class::class_family(&self.board, named.name) != self.manifest.class {
            return Ok(false);
        }
        if n == 1 {
            return Ok(true);
        }
        let key = self.board.mincode(self.board.complement(p).code());
        Ok(self.level(n)?.is_some_and(|f| f.contains(key)))
    }

    pub fn winning_jumps(&self, p: Position) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for j in self.board.legal_jumps(p) {
            if self.is_solvable(self.board.jump_unchecked(p, j))? {
                out.push(j);
            }
        }
        Ok(out)
    }
}
