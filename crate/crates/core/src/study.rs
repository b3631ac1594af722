//! Convergence studies: a refinement sequence for one case, optionally
//! replicated over independent random point sets.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::basis::BasisSet;
use crate::collocation::{generate, CollocationConfig, CollocationSet, Scheme};
use crate::error::{Error, Result};
use crate::mesh::{Domain, Mesh};
use crate::mollifier::{Mollifier, MollifierFamily};
use crate::problems::{CaseKind, ProblemCase};
use crate::system::{assemble, field_errors, solve, CollocationSystem, FieldErrors, Solution};

/// Breakpoints of the coarsest 1D Poisson mesh.
pub const POISSON_BASE: [f64; 7] = [0.0, 0.15, 0.35, 0.5, 0.65, 0.85, 1.0];

/// Finite-difference tolerance for the source/solution consistency check.
pub const CONSISTENCY_TOL: f64 = 1e-4;

#[derive(Clone, Debug, PartialEq)]
pub struct StudyConfig {
    pub case: CaseKind,
    /// Polynomial order `r_p`.
    pub rp: usize,
    pub mollifier: MollifierFamily,
    /// Mollifier width factor κ.
    pub kappa: f64,
    pub scheme: Scheme,
    pub beta: usize,
    pub gamma: Option<usize>,
    pub gamma_boundary: Option<usize>,
    pub sigma: f64,
    pub replicates: usize,
    pub seed: u64,
    /// Refinement level indices.
    pub levels: Vec<usize>,
    /// Seed of the Voronoi generators.
    pub mesh_seed: u64,
    pub lloyd: usize,
    /// Use structured grids instead of Voronoi meshes on the unit square.
    pub grid: bool,
    /// Cells of the coarsest uniform 1D biharmonic mesh.
    pub base_cells: usize,
    pub scale_rows: bool,
    /// Weight ε of the ghost-coefficient damping rows; 0 disables them.
    pub ghost_damping: f64,
    pub out: Option<PathBuf>,
}

impl StudyConfig {
    /// Defaults of a case.
    pub fn for_case(case: CaseKind) -> Self {
        let base = StudyConfig {
            case,
            rp: 2,
            mollifier: MollifierFamily::BSpline2,
            kappa: 1.0,
            scheme: Scheme::Uniform,
            beta: 6,
            gamma: None,
            gamma_boundary: None,
            sigma: 0.1,
            replicates: 1,
            seed: 0,
            levels: vec![0, 1, 2, 3],
            mesh_seed: 1,
            lloyd: 10,
            grid: false,
            base_cells: 4,
            scale_rows: true,
            ghost_damping: 1e-5,
            out: None,
        };
        match case {
            CaseKind::Poisson1d => StudyConfig { ghost_damping: 0.0, ..base },
            CaseKind::Biharmonic1d => StudyConfig {
                rp: 5,
                mollifier: MollifierFamily::Octic,
                beta: 8,
                base_cells: 8,
                ghost_damping: 0.0,
                ..base
            },
            CaseKind::Elasticity2d => StudyConfig {
                rp: 1,
                mollifier: MollifierFamily::Hexic,
                scheme: Scheme::Gauss,
                beta: 16,
                gamma: Some(4),
                levels: vec![0, 1, 2],
                ..base
            },
            CaseKind::PlateBending => StudyConfig {
                rp: 4,
                mollifier: MollifierFamily::Decic,
                scheme: Scheme::Gauss,
                beta: 16,
                gamma: Some(7),
                levels: vec![0, 1, 2],
                ..base
            },
            CaseKind::PlateHole => StudyConfig {
                rp: 1,
                mollifier: MollifierFamily::Hexic,
                scheme: Scheme::Gauss,
                beta: 16,
                gamma: Some(3),
                levels: vec![0, 1, 2],
                ..base
            },
        }
    }

    /// Parses a `key = value` file; `#` starts a comment. The `case` key
    /// selects the defaults and may appear anywhere in the file.
    pub fn parse(text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        let mut case = None;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse { line: i + 1, message: format!("expected key = value, got {line:?}") })?;
            let (k, v) = (k.trim(), v.trim());
            if k == "case" {
                case = Some(v.parse::<CaseKind>().map_err(|e| Error::Parse { line: i + 1, message: e.to_string() })?);
            } else {
                pairs.push((i + 1, k.to_owned(), v.to_owned()));
            }
        }
        let case = case.ok_or_else(|| Error::Config("missing key \"case\"".into()))?;
        let mut cfg = StudyConfig::for_case(case);
        for (line, k, v) in pairs {
            cfg.set(&k, &v).map_err(|e| Error::Parse { line, message: e.to_string() })?;
        }
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::parse(&fs::read_to_string(path)?)
    }

    /// Sets one key. `case` is not accepted here: it fixes the defaults.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<V: std::str::FromStr>(key: &str, v: &str) -> Result<V> {
            v.parse().map_err(|_| Error::Config(format!("invalid value {v:?} for {key}")))
        }
        fn opt(key: &str, v: &str) -> Result<Option<usize>> {
            if v == "auto" || v.is_empty() {
                Ok(None)
            } else {
                num(key, v).map(Some)
            }
        }
        match key {
            "rp" => self.rp = num(key, value)?,
            "mollifier" => self.mollifier = value.parse()?,
            "kappa" => self.kappa = num(key, value)?,
            "scheme" => self.scheme = value.parse()?,
            "beta" => self.beta = num(key, value)?,
            "gamma" => self.gamma = opt(key, value)?,
            "gamma_boundary" => self.gamma_boundary = opt(key, value)?,
            "sigma" => self.sigma = num(key, value)?,
            "replicates" => self.replicates = num(key, value)?,
            "seed" => self.seed = num(key, value)?,
            "levels" => self.levels = parse_levels(value)?,
            "mesh_seed" => self.mesh_seed = num(key, value)?,
            "lloyd" => self.lloyd = num(key, value)?,
            "mesh" => {
                self.grid = match value {
                    "grid" => true,
                    "voronoi" => false,
                    _ => return Err(Error::Config(format!("mesh must be grid or voronoi, got {value:?}"))),
                }
            }
            "base_cells" => self.base_cells = num(key, value)?,
            "scale_rows" => self.scale_rows = num(key, value)?,
            "ghost_damping" => self.ghost_damping = num(key, value)?,
            "out" => self.out = Some(PathBuf::from(value)),
            _ => return Err(Error::Config(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.levels.len() < 2 {
            return Err(Error::Config("at least two levels are needed to fit a rate".into()));
        }
        if !(self.kappa > 0.0) {
            return Err(Error::Config("kappa must be positive".into()));
        }
        if self.replicates == 0 {
            return Err(Error::Config("replicates must be at least 1".into()));
        }
        if !(0.0..0.5).contains(&self.sigma) {
            return Err(Error::Config("sigma must lie in [0, 0.5)".into()));
        }
        if !(self.ghost_damping >= 0.0 && self.ghost_damping.is_finite()) {
            return Err(Error::Config("ghost_damping must be finite and non-negative".into()));
        }
        if self.beta == 0 || self.base_cells == 0 {
            return Err(Error::Config("beta and base_cells must be positive".into()));
        }
        Ok(())
    }

    pub fn collocation(&self, replicate: u64) -> CollocationConfig {
        CollocationConfig {
            scheme: self.scheme,
            beta: self.beta,
            gamma: self.gamma,
            gamma_boundary: self.gamma_boundary,
            sigma_fraction: self.sigma,
            rng_seed: self.seed,
            replicate,
        }
    }
}

/// `"4"` means levels 0..4; `"1,2,3"` lists them.
fn parse_levels(v: &str) -> Result<Vec<usize>> {
    let bad = || Error::Config(format!("invalid levels {v:?}"));
    if v.contains(',') {
        v.split(',').map(|s| s.trim().parse().map_err(|_| bad())).collect()
    } else {
        let n: usize = v.trim().parse().map_err(|_| bad())?;
        Ok((0..n).collect())
    }
}

/// Least-squares slope of `log e` against `log h`.
pub fn fit_rate(h: &[f64], e: &[f64]) -> Result<f64> {
    if h.len() != e.len() || h.len() < 2 {
        return Err(Error::InvalidInput("need at least two (h, e) pairs".into()));
    }
    if h.iter().chain(e).any(|v| !(*v > 0.0) || !v.is_finite()) {
        return Err(Error::InvalidInput("rate fit needs positive finite values".into()));
    }
    let x: Vec<f64> = h.iter().map(|v| v.ln()).collect();
    let y: Vec<f64> = e.iter().map(|v| v.ln()).collect();
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidInput("all mesh sizes are equal".into()));
    }
    let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
    Ok(sxy / sxx)
}

/// Rate over the finite entries of a series.
fn rate_of(h: &[f64], e: &[Option<f64>]) -> Option<f64> {
    let (hh, ee): (Vec<f64>, Vec<f64>) =
        h.iter().zip(e).filter_map(|(&h, e)| e.filter(|v| v.is_finite() && *v > 0.0).map(|v| (h, v))).unzip();
    fit_rate(&hh, &ee).ok()
}

/// Results of one refinement level.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelResult {
    pub level: usize,
    /// Interior cells.
    pub n_c: usize,
    pub h: f64,
    pub n_b: usize,
    pub n_z: usize,
    /// Replicate means.
    pub e_l2: f64,
    pub e_h1: f64,
    pub e_energy: Option<f64>,
    /// Mean and sample standard deviation of the L² error over replicates.
    pub mean: f64,
    pub std: f64,
    /// L² error of every replicate.
    pub replicate_l2: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StudyResult {
    pub config: StudyConfig,
    pub levels: Vec<LevelResult>,
    pub rate_l2: Option<f64>,
    pub rate_h1: Option<f64>,
    pub rate_energy: Option<f64>,
}

impl StudyResult {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("level,n_c,h,n_b,n_z,e_L2,e_H1,e_energy,mean,std\n");
        for l in &self.levels {
            let energy = l.e_energy.map(|v| format!("{v:.12e}")).unwrap_or_default();
            let _ = writeln!(
                s,
                "{},{},{:.12e},{},{},{:.12e},{:.12e},{},{:.12e},{:.12e}",
                l.level, l.n_c, l.h, l.n_b, l.n_z, l.e_l2, l.e_h1, energy, l.mean, l.std
            );
        }
        s
    }

    pub fn rates_summary(&self) -> String {
        let c = &self.config;
        let fmt = |r: Option<f64>| r.map(|v| format!("{v:.4}")).unwrap_or_else(|| "n/a".into());
        let mut s = String::new();
        let _ = writeln!(s, "case: {}", c.case);
        let _ = writeln!(s, "rp: {}  mollifier: {}  kappa: {}  scheme: {}", c.rp, c.mollifier.name(), c.kappa, c.scheme);
        let _ = writeln!(s, "replicates: {}", c.replicates);
        let _ = writeln!(s, "rate_L2: {}", fmt(self.rate_l2));
        let _ = writeln!(s, "rate_H1: {}", fmt(self.rate_h1));
        if self.rate_energy.is_some() {
            let _ = writeln!(s, "rate_energy: {}", fmt(self.rate_energy));
        }
        s
    }

    /// Writes `study.csv` and `rates.txt` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("study.csv"), self.to_csv())?;
        fs::write(dir.join("rates.txt"), self.rates_summary())?;
        Ok(())
    }
}

/// Mesh of a refinement level, before ghost padding.
pub fn level_mesh(cfg: &StudyConfig, level: usize) -> Result<Mesh<f64>> {
    match cfg.case {
        CaseKind::Poisson1d => {
            let mut m = Mesh::intervals_1d(&POISSON_BASE)?;
            for _ in 0..level {
                m = m.bisect()?;
            }
            Ok(m)
        }
        CaseKind::Biharmonic1d => Mesh::uniform_1d(cfg.base_cells << level, 0.0, 1.0),
        CaseKind::Elasticity2d | CaseKind::PlateBending if cfg.grid => {
            let n = 4usize << level;
            Mesh::grid_2d([n, n], Domain::unit_square())
        }
        CaseKind::Elasticity2d | CaseKind::PlateBending => {
            let n = 16usize << (2 * level);
            // Each level gets its own generator stream.
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.mesh_seed);
            rng.set_stream(level as u64);
            Mesh::random_voronoi(n, rng.random(), cfg.lloyd)
        }
        CaseKind::PlateHole => Mesh::quarter_plate_hole_mesh(level),
    }
}

/// Mesh size used for rate fits: largest cell in 1D, `√(mean area)` in 2D.
pub fn level_h(mesh: &Mesh<f64>) -> f64 {
    if mesh.dim() == 1 {
        mesh.h_max()
    } else {
        mesh.h_avg()
    }
}

/// Everything built for one level and replicate.
pub struct LevelRun {
    pub problem: ProblemCase<f64>,
    pub basis: BasisSet<f64>,
    pub points: CollocationSet<f64>,
    pub system: CollocationSystem<f64>,
    pub solution: Solution<f64>,
    pub errors: FieldErrors<f64>,
}

/// Padded mesh and basis of a level.
pub fn level_basis(cfg: &StudyConfig, level: usize) -> Result<BasisSet<f64>> {
    let mesh = level_mesh(cfg, level)?;
    let h_m = mesh.mollifier_width(cfg.kappa);
    let padded = mesh.pad_ghost(h_m)?;
    let moll = Mollifier::new(cfg.mollifier, h_m, padded.dim())?;
    BasisSet::build(padded, moll, cfg.rp)
}

/// Points, assembly, solve and errors for one replicate on a prepared basis.
pub fn run_replicate(cfg: &StudyConfig, problem: &ProblemCase<f64>, basis: &BasisSet<f64>, replicate: u64) -> Result<(CollocationSet<f64>, CollocationSystem<f64>, Solution<f64>, FieldErrors<f64>)> {
    let points = generate(basis.mesh(), basis.n_b(), &cfg.collocation(replicate), problem.bc)?;
    let mut system = assemble(problem, basis, &points, cfg.scale_rows)?;
    system.damp_ghosts(basis, cfg.ghost_damping);
    let solution = solve(&system, basis)?;
    let errors = field_errors(problem, basis, &solution, &points.interior)?;
    Ok((points, system, solution, errors))
}

/// Full pipeline for one level (replicate 0).
pub fn run_level(cfg: &StudyConfig, level: usize) -> Result<LevelRun> {
    let problem = ProblemCase::new(cfg.case);
    let basis = level_basis(cfg, level)?;
    let (points, system, solution, errors) = run_replicate(cfg, &problem, &basis, 0)?;
    Ok(LevelRun { problem, basis, points, system, solution, errors })
}

/// Sample points for the consistency check, away from the boundary.
fn check_points(domain: &Domain<f64>) -> Vec<[f64; 2]> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut out = Vec::new();
    while out.len() < 16 {
        let p = [rng.random_range(0.05..0.95), if domain.dim() == 1 { 0.0 } else { rng.random_range(0.05..0.95) }];
        if let Domain::RectMinusDisk { center, radius, .. } = domain {
            if (p[0] - center[0]).hypot(p[1] - center[1]) < radius + 0.05 {
                continue;
            }
        }
        out.push(p);
    }
    out
}

/// Runs all levels. Replicates of a level run concurrently.
pub fn run_study(cfg: &StudyConfig) -> Result<StudyResult> {
    cfg.validate()?;
    let problem = ProblemCase::<f64>::new(cfg.case);
    let err = problem.consistency_error(&check_points(&problem.domain));
    if !(err < CONSISTENCY_TOL) {
        return Err(Error::InvalidInput(format!("source and exact solution disagree (relative residual {err:.3e})")));
    }
    let mut levels = Vec::with_capacity(cfg.levels.len());
    for &level in &cfg.levels {
        let at = |e: Error| Error::AtLevel { level, source: Box::new(e) };
        let basis = level_basis(cfg, level).map_err(at)?;
        let runs: Vec<(usize, FieldErrors<f64>)> = (0..cfg.replicates as u64)
            .into_par_iter()
            .map(|r| run_replicate(cfg, &problem, &basis, r).map(|(p, _, _, e)| (p.n_z(), e)))
            .collect::<Result<_>>()
            .map_err(at)?;
        let n = runs.len() as f64;
        let l2: Vec<f64> = runs.iter().map(|r| r.1.l2).collect();
        let mean = l2.iter().sum::<f64>() / n;
        let std = if runs.len() > 1 { (l2.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt() } else { 0.0 };
        let e_h1 = runs.iter().map(|r| r.1.h1).sum::<f64>() / n;
        let e_energy = runs.iter().map(|r| r.1.energy).sum::<Option<f64>>().map(|s| s / n);
        let mesh = basis.mesh();
        levels.push(LevelResult {
            level,
            n_c: mesh.n_interior(),
            h: level_h(mesh),
            n_b: problem.components() * basis.n_b(),
            n_z: runs[0].0,
            e_l2: mean,
            e_h1,
            e_energy,
            mean,
            std,
            replicate_l2: l2,
        });
    }
    let h: Vec<f64> = levels.iter().map(|l| l.h).collect();
    let series = |f: fn(&LevelResult) -> Option<f64>| levels.iter().map(f).collect::<Vec<_>>();
    let result = StudyResult {
        config: cfg.clone(),
        rate_l2: rate_of(&h, &series(|l| Some(l.e_l2))),
        rate_h1: rate_of(&h, &series(|l| Some(l.e_h1))),
        rate_energy: rate_of(&h, &series(|l| l.e_energy)),
        levels,
    };
    if let Some(dir) = &cfg.out {
        result.write(dir)?;
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rate_of_exact_powers() {
        let h = [0.5, 0.25, 0.125, 0.0625];
        let e: Vec<f64> = h.iter().map(|v| v * v).collect();
        assert!((fit_rate(&h, &e).unwrap() - 2.0).abs() < 1e-12);
        let e: Vec<f64> = h.iter().map(|v: &f64| 7.0 * v.powf(1.5)).collect();
        assert!((fit_rate(&h, &e).unwrap() - 1.5).abs() < 1e-12);
    }

    #[test]
    fn rate_rejects_bad_input() {
        assert!(fit_rate(&[0.1], &[0.1]).is_err());
        assert!(fit_rate(&[0.1, 0.2], &[0.0, 0.1]).is_err());
        assert!(fit_rate(&[0.1, 0.1], &[0.2, 0.1]).is_err());
    }

    #[test]
    fn rate_skips_missing_levels() {
        let r = rate_of(&[0.5, 0.25, 0.125], &[Some(0.25), None, Some(0.015625)]).unwrap();
        assert!((r - 2.0).abs() < 1e-12);
        assert!(rate_of(&[0.5, 0.25], &[Some(0.1), Some(f64::NAN)]).is_none());
    }

    #[test]
    fn config_parsing() {
        let cfg = StudyConfig::parse("# demo\nrp = 3\ncase = poisson1d\nlevels = 1,2,3\nscheme = quasirandom\ngamma = auto\n")
            .unwrap();
        assert_eq!(cfg.case, CaseKind::Poisson1d);
        assert_eq!(cfg.rp, 3);
        assert_eq!(cfg.levels, vec![1, 2, 3]);
        assert_eq!(cfg.scheme, Scheme::QuasiRandom);
        assert_eq!(cfg.gamma, None);
        assert!(matches!(StudyConfig::parse("case = poisson1d\nfoo = 1\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(StudyConfig::parse("rp = 1\n"), Err(Error::Config(_))));
        assert!(matches!(StudyConfig::parse("case = poisson1d\nrp\n"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn validation() {
        let mut cfg = StudyConfig::for_case(CaseKind::Poisson1d);
        cfg.levels = vec![0];
        assert!(cfg.validate().is_err());
        cfg.levels = vec![0, 1];
        cfg.kappa = 0.0;
        assert!(cfg.validate().is_err());
        cfg.kappa = 1.0;
        cfg.set("ghost_damping", "-1").unwrap();
        assert!(cfg.validate().is_err());
        cfg.set("ghost_damping", "0").unwrap();
        assert!(cfg.validate().is_ok());
    }

    #[test]
    fn poisson_level_meshes() {
        let cfg = StudyConfig::for_case(CaseKind::Poisson1d);
        assert_eq!(level_mesh(&cfg, 0).unwrap().n_cells(), 6);
        assert_eq!(level_mesh(&cfg, 2).unwrap().n_cells(), 24);
        assert!((level_h(&level_mesh(&cfg, 1).unwrap()) - 0.1).abs() < 1e-15);
    }

    #[test]
    fn voronoi_levels_are_reproducible() {
        let cfg = StudyConfig::for_case(CaseKind::Elasticity2d);
        let a = level_mesh(&cfg, 1).unwrap();
        let b = level_mesh(&cfg, 1).unwrap();
        assert_eq!(a.n_cells(), 64);
        assert_eq!(a.cells(), b.cells());
    }
}
