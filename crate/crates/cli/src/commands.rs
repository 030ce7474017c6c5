//! One handler per subcommand. Handlers return their text; [`dispatch`]
//! decides where it goes.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use num_rational::BigRational;
use polarsum::exact::{exact_entropy_diff_cyclic, exact_entropy_diff_integer};
use polarsum::field::is_prime;
use polarsum::kernel::{conditional_spread, optimal_coefficient, support_condition, two_optimal_kernel};
use polarsum::polar::{
    construct, load_or_construct, AdditiveChannel, CacheStatus, FiniteChannel, ReliabilityProfile,
};
use polarsum::prob::Probability;
use polarsum::sim::{
    bler_csv, bler_curve_with_profile, comment_header, martingale_csv, martingale_sample,
    scatter_csv, spread_scatter, ChannelFamily, Sampler, DECODE_SEED_OFFSET,
};
use polarsum::sumsets::{
    exact_entropy_diff_uniform, find_target_diff, lp_gap_distributions, mstd_search, sidon_set,
    stein_iterate, Ambient, IntSet, MstdQuery, CONWAY, MARICA, MSTD_CSV_HEADER,
};
use polarsum::{CyclicDistribution, IntegerDistribution, LogBase};

use crate::error::{CliError, CliResult};
use crate::parse;
use crate::{
    Cli, Command, EntropyDiffArgs, KernelArgs, LpGapArgs, MartingaleArgs, MstdArgs, PolarArgs,
    PolarPreset, SetPreset, SidonArgs, SpreadArgs, SpreadFamily, SteinArgs, TargetArgs,
};

/// A piece of output. Blocks with a tag go to separate files when an output
/// path is given.
struct Block {
    tag: Option<String>,
    text: String,
}

impl Block {
    fn plain(text: String) -> Vec<Block> {
        vec![Block { tag: None, text }]
    }
}

pub fn dispatch(cli: &Cli) -> CliResult<()> {
    let blocks = match &cli.command {
        Command::EntropyDiff(a) => entropy_diff(a)?,
        Command::MstdSearch(a) => mstd(a)?,
        Command::Stein(a) => stein(a)?,
        Command::Sidon(a) => sidon(a)?,
        Command::TargetDiff(a) => target_diff(a)?,
        Command::LpGap(a) => lp_gap(a)?,
        Command::KernelOpt(a) => kernel_opt(a)?,
        Command::PolarSim(a) => polar_sim(a)?,
        Command::Martingale(a) => martingale(a)?,
        Command::SpreadPlot(a) => spread_plot(a)?,
    };
    emit(cli.output.as_deref(), &blocks)
}

/// `out.csv` with tag `c2` becomes `out-c2.csv`.
fn tagged_path(path: &Path, tag: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}-{tag}.{}", ext.to_string_lossy()),
        None => format!("{stem}-{tag}"),
    };
    path.with_file_name(name)
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))
}

fn emit(output: Option<&Path>, blocks: &[Block]) -> CliResult<()> {
    match output {
        None => {
            for b in blocks {
                print!("{}", b.text);
            }
            Ok(())
        }
        Some(path) if blocks.len() == 1 => write_file(path, &blocks[0].text),
        Some(path) => {
            for b in blocks {
                let p = b.tag.as_deref().map_or_else(|| path.to_path_buf(), |t| tagged_path(path, t));
                write_file(&p, &b.text)?;
                eprintln!("wrote {}", p.display());
            }
            Ok(())
        }
    }
}

fn row(out: &mut String, key: &str, value: impl std::fmt::Display) {
    writeln!(out, "{key:<12}{value}").unwrap();
}

fn log_base(s: &str) -> CliResult<LogBase> {
    if s.eq_ignore_ascii_case("e") {
        return Ok(LogBase::NATURAL);
    }
    let b: f64 = s
        .parse()
        .map_err(|_| CliError::usage(format!("log base `{s}` is neither e nor a number")))?;
    Ok(LogBase::new(b)?)
}

fn join<T: ToString>(xs: &[T], sep: &str) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(sep)
}

// ---- entropy-diff ----

fn preset_set(p: SetPreset) -> (Ambient, Vec<i64>) {
    match p {
        SetPreset::Conway => (Ambient::Integers, CONWAY.to_vec()),
        SetPreset::Marica => (Ambient::Integers, MARICA.to_vec()),
        SetPreset::Second => (Ambient::Integers, vec![0, 1, 3, 4, 5, 6, 7, 10]),
        SetPreset::Z12 => (Ambient::Cyclic(12), vec![0, 1, 2, 4, 5, 9]),
    }
}

fn entropy_diff(a: &EntropyDiffArgs) -> CliResult<Vec<Block>> {
    let base = log_base(&a.base)?;
    let mut out = String::new();
    let (ambient, set_elements) = match a.preset {
        Some(p) => {
            let (amb, el) = preset_set(p);
            (amb, Some(el))
        }
        None => (parse::group(&a.group)?, None),
    };
    row(&mut out, "group", ambient);
    if a.dist && a.preset.is_none() {
        let input = a.input.as_deref().expect("clap requires input without a preset");
        distribution_report(&mut out, ambient, input, a.exact, base)?;
        return Ok(Block::plain(out));
    }
    let elements = match set_elements {
        Some(el) => el,
        None => parse::int_list(a.input.as_deref().expect("clap requires input without a preset"))?,
    };
    let set = match ambient {
        Ambient::Integers => IntSet::integers(elements),
        Ambient::Cyclic(m) => IntSet::cyclic(m, elements)?,
    };
    let (h_sum, h_diff) = match ambient {
        Ambient::Integers => {
            let d = set.uniform_integer::<f64>()?;
            entropies_integer(&d, base)
        }
        Ambient::Cyclic(_) => {
            let d = set.uniform_cyclic::<f64>()?;
            entropies_cyclic(&d, base)?
        }
    };
    row(&mut out, "set", &set);
    row(&mut out, "|A+A|", set.sumset(&set)?.len());
    row(&mut out, "|A-A|", set.difference_set(&set)?.len());
    row(&mut out, "H(X+Y)", h_sum);
    row(&mut out, "H(X-Y)", h_diff);
    row(&mut out, "difference", set.uniform_entropy_diff(base)?);
    if a.exact {
        row(&mut out, "exact", exact_entropy_diff_uniform(&set)?);
    }
    Ok(Block::plain(out))
}

fn entropies_integer(d: &IntegerDistribution<f64>, base: LogBase) -> (f64, f64) {
    (d.convolve(d, false).entropy(base), d.convolve(d, true).entropy(base))
}

fn entropies_cyclic(d: &CyclicDistribution<f64>, base: LogBase) -> CliResult<(f64, f64)> {
    Ok((d.convolve(d)?.entropy(base), d.convolve(&d.negate())?.entropy(base)))
}

fn check_length(ambient: Ambient, len: usize) -> CliResult<()> {
    match ambient {
        Ambient::Cyclic(m) if m as usize != len => Err(CliError::usage(format!(
            "group Z/{m}Z needs {m} masses, got {len}"
        ))),
        _ => Ok(()),
    }
}

fn distribution_report(
    out: &mut String,
    ambient: Ambient,
    input: &str,
    exact: bool,
    base: LogBase,
) -> CliResult<()> {
    if exact {
        let masses = parse::rational_list(input)?;
        check_length(ambient, masses.len())?;
        let value = match ambient {
            Ambient::Integers => {
                let support = (0..masses.len() as i64).collect();
                exact_entropy_diff_integer(&IntegerDistribution::new(support, masses.clone())?)?
            }
            Ambient::Cyclic(_) => exact_entropy_diff_cyclic(&CyclicDistribution::new(masses.clone())?)?,
        };
        float_report(out, ambient, masses.iter().map(|p| p.to_f64()).collect(), base)?;
        row(out, "exact", value);
        return Ok(());
    }
    let float_masses = parse::float_list(input)?;
    check_length(ambient, float_masses.len())?;
    float_report(out, ambient, float_masses, base)
}

fn float_report(out: &mut String, ambient: Ambient, masses: Vec<f64>, base: LogBase) -> CliResult<()> {
    row(out, "masses", join(&masses, ","));
    let ((h_sum, h_diff), diff) = match ambient {
        Ambient::Integers => {
            let d = IntegerDistribution::new((0..masses.len() as i64).collect(), masses)?;
            (entropies_integer(&d, base), d.sum_minus_diff_entropy(base))
        }
        Ambient::Cyclic(_) => {
            let d = CyclicDistribution::new(masses)?;
            (entropies_cyclic(&d, base)?, d.sum_minus_diff_entropy(base))
        }
    };
    row(out, "H(X+Y)", h_sum);
    row(out, "H(X-Y)", h_diff);
    row(out, "difference", diff);
    Ok(())
}

// ---- sumsets ----

fn mstd(a: &MstdArgs) -> CliResult<Vec<Block>> {
    let (query, ambient) = match (a.modulus, a.width) {
        (Some(m), _) => (
            MstdQuery::cyclic(m, a.max_size.unwrap_or(m as usize), a.canonical),
            format!("Z/{m}Z"),
        ),
        (None, Some(w)) => (
            MstdQuery::integers(w, a.max_size.unwrap_or(w as usize + 1), a.canonical),
            format!("Z[0,{w}]"),
        ),
        (None, None) => unreachable!("clap requires --mod or --width"),
    };
    let query = query.with_min_size(a.min_size);
    let max_size = query.max_size;
    let search = mstd_search(query)?;
    let mut out = comment_header(&[
        ("ambient", ambient),
        ("min_size", a.min_size.to_string()),
        ("max_size", max_size.to_string()),
        ("canonical", a.canonical.to_string()),
    ]);
    out.push_str(MSTD_CSV_HEADER);
    out.push('\n');
    for rec in search {
        out.push_str(&rec.csv_line());
        out.push('\n');
    }
    Ok(Block::plain(out))
}

fn stein(a: &SteinArgs) -> CliResult<Vec<Block>> {
    let base = IntSet::integers(parse::int_list(&a.set)?);
    let trace = stein_iterate(&base, a.levels, a.budget)?;
    let mut out = comment_header(&[
        ("base", base.to_string()),
        ("levels", a.levels.to_string()),
        ("budget", a.budget.to_string()),
    ]);
    out.push_str("level,multiplier,size,sums,diffs,elements\n");
    writeln!(
        out,
        "0,,{},{},{},{}",
        base.len(),
        base.sumset(&base)?.len(),
        base.difference_set(&base)?.len(),
        join(base.elements(), ";")
    )
    .unwrap();
    for (j, level) in trace.levels.iter().enumerate() {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            j + 1,
            level.multiplier,
            level.set.len(),
            level.sums,
            level.diffs,
            join(level.set.elements(), ";")
        )
        .unwrap();
    }
    Ok(Block::plain(out))
}

fn sidon(a: &SidonArgs) -> CliResult<Vec<Block>> {
    if a.n == 0 {
        return Err(CliError::usage("Sidon set size must be positive"));
    }
    let set = sidon_set(a.n);
    let mut out = String::new();
    row(&mut out, "set", &set);
    row(&mut out, "size", set.len());
    row(&mut out, "|A+A|", set.sumset(&set)?.len());
    row(&mut out, "|A-A|", set.difference_set(&set)?.len());
    Ok(Block::plain(out))
}

fn target_diff(a: &TargetArgs) -> CliResult<Vec<Block>> {
    let t = find_target_diff(a.m, a.tol)?;
    let mut out = String::new();
    row(&mut out, "target", a.m);
    row(&mut out, "achieved", t.diff);
    row(&mut out, "error", (t.diff - a.m).abs());
    row(&mut out, "copies", t.k);
    row(&mut out, "base", t.base);
    row(&mut out, "weight", t.t);
    row(&mut out, "support", t.distribution.len());
    if let Some(path) = &a.dist_out {
        let mut csv = comment_header(&[("target", a.m.to_string()), ("tol", a.tol.to_string())]);
        csv.push_str("x,p\n");
        for (x, p) in t.distribution.iter() {
            writeln!(csv, "{x},{p}").unwrap();
        }
        write_file(path, &csv)?;
    }
    Ok(Block::plain(out))
}

fn lp_gap(a: &LpGapArgs) -> CliResult<Vec<Block>> {
    let g = lp_gap_distributions(a.k)?;
    let mut out = String::new();
    row(&mut out, "size", g.set.len());
    row(&mut out, "H(X+Y)", g.sum_entropy);
    row(&mut out, "upper", g.sum_upper);
    row(&mut out, "H(X-Y)", g.diff_entropy);
    row(&mut out, "lower", g.diff_lower);
    row(&mut out, "gap", g.gap());
    Ok(Block::plain(out))
}

// ---- kernels ----

fn require_field(q: u64) -> CliResult<()> {
    if is_prime(q) {
        Ok(())
    } else {
        Err(CliError::usage(format!(
            "q = {q} is not prime; kernels are defined over the field F_q, which needs q prime"
        )))
    }
}

fn kernel_opt(a: &KernelArgs) -> CliResult<Vec<Block>> {
    require_field(a.q)?;
    let q = a.q as usize;
    let support = match &a.support {
        Some(s) => Some(IntSet::cyclic(a.q, parse::int_list(s)?)?),
        None => None,
    };
    let text = if a.exact {
        let mu = match (&support, &a.noise) {
            (Some(s), _) => CyclicDistribution::<BigRational>::uniform_on(q, s.elements())?,
            (None, Some(n)) => noise_law(q, parse::rational_list(n)?)?,
            (None, None) => unreachable!("clap requires --noise or --support"),
        };
        kernel_table(&mu)?
    } else {
        let mu = match (&support, &a.noise) {
            (Some(s), _) => CyclicDistribution::<f64>::uniform_on(q, s.elements())?,
            (None, Some(n)) => noise_law(q, parse::float_list(n)?)?,
            (None, None) => unreachable!("clap requires --noise or --support"),
        };
        kernel_table(&mu)?
    };
    Ok(Block::plain(text))
}

fn noise_law<P: Probability>(q: usize, masses: Vec<P>) -> CliResult<CyclicDistribution<P>> {
    if masses.len() != q {
        return Err(CliError::usage(format!(
            "noise has {} masses but q = {q}",
            masses.len()
        )));
    }
    Ok(CyclicDistribution::new(masses)?)
}

fn kernel_table<P: Probability>(mu: &CyclicDistribution<P>) -> CliResult<String> {
    let q = mu.modulus() as u32;
    let supp = IntSet::cyclic(q as u64, mu.support().into_iter().map(|s| s as i64))?;
    let mut out = String::new();
    row(&mut out, "q", q);
    row(&mut out, "support", &supp);
    row(&mut out, "H(mu)", mu.to_f64().entropy(LogBase::new(q as f64)?));
    out.push_str("lambda,sum_entropy,spread,cond_entropy,support_condition\n");
    for lambda in 1..q {
        let r = conditional_spread(mu, lambda)?;
        writeln!(
            out,
            "{},{},{},{},{}",
            r.lambda,
            r.sum_entropy,
            r.spread,
            r.cond_entropy,
            support_condition(&supp, lambda)?
        )
        .unwrap();
    }
    let best = optimal_coefficient(mu)?;
    let kernel = two_optimal_kernel(mu)?;
    row(&mut out, "optimal", format!("{{{}}}", join(&best, ",")));
    let [[a, b], [c, d]] = kernel.matrix();
    row(&mut out, "kernel", format!("[[{a},{b}],[{c},{d}]]"));
    Ok(out)
}

// ---- polar codes ----

struct PolarPlan {
    noise: Vec<f64>,
    n: usize,
    cs: Option<Vec<u32>>,
    rates: Vec<f64>,
    construct_trials: u64,
    decode_trials: u64,
}

fn steps(count: u32, denom: f64) -> Vec<f64> {
    (1..=count).map(|i| i as f64 / denom).collect()
}

fn preset_plan(p: PolarPreset) -> PolarPlan {
    match p {
        PolarPreset::Figure2 => PolarPlan {
            noise: vec![0.7, 0.3, 0.0],
            n: 1024,
            cs: Some(vec![1, 2]),
            rates: steps(6, 10.0),
            construct_trials: 100_000,
            decode_trials: 10_000,
        },
        PolarPreset::Figure3 => PolarPlan {
            noise: vec![0.5, 0.5, 0.0, 0.0, 0.0],
            n: 1024,
            cs: Some(vec![2]),
            rates: steps(12, 20.0),
            construct_trials: 100_000,
            decode_trials: 10_000,
        },
        PolarPreset::Noiseless => PolarPlan {
            noise: vec![1.0, 0.0, 0.0],
            n: 256,
            cs: None,
            rates: steps(4, 4.0),
            construct_trials: 1_000,
            decode_trials: 1_000,
        },
    }
}

fn resolve_plan(a: &PolarArgs) -> CliResult<PolarPlan> {
    let mut plan = match a.preset {
        Some(p) => preset_plan(p),
        None => PolarPlan {
            noise: Vec::new(),
            n: 1024,
            cs: None,
            rates: steps(9, 10.0),
            construct_trials: 10_000,
            decode_trials: 1_000,
        },
    };
    if let Some(n) = &a.noise {
        plan.noise = parse::float_list(n)?;
    }
    if plan.noise.is_empty() {
        return Err(CliError::usage("polar-sim needs --noise or --preset"));
    }
    if let Some(q) = a.q {
        if q as usize != plan.noise.len() {
            return Err(CliError::usage(format!(
                "noise has {} masses but q = {q}",
                plan.noise.len()
            )));
        }
    }
    require_field(plan.noise.len() as u64)?;
    if let Some(n) = a.n {
        plan.n = n;
    }
    if let Some(c) = &a.c {
        plan.cs = parse::coefficients(c)?;
    }
    if let Some(r) = &a.rates {
        plan.rates = parse::float_list(r)?;
    }
    if let Some(t) = a.construct_trials {
        plan.construct_trials = t;
    }
    if let Some(t) = a.decode_trials {
        plan.decode_trials = t;
    }
    Ok(plan)
}

fn profile_for(
    a: &PolarArgs,
    channel: &AdditiveChannel,
    plan: &PolarPlan,
    c: u32,
) -> CliResult<ReliabilityProfile> {
    let Some(dir) = &a.cache_dir else {
        return Ok(construct(channel, plan.n, c, plan.construct_trials, a.seed)?);
    };
    fs::create_dir_all(dir)
        .map_err(|e| CliError::Runtime(format!("cannot create cache directory {}: {e}", dir.display())))?;
    let (profile, status) = load_or_construct(dir, channel, plan.n, c, plan.construct_trials, a.seed)?;
    if let CacheStatus::Rebuilt(reason) = status {
        eprintln!("warning: rebuilt reliability profile in {}: {reason}", dir.display());
    }
    Ok(profile)
}

fn polar_sim(a: &PolarArgs) -> CliResult<Vec<Block>> {
    let plan = resolve_plan(a)?;
    let channel = AdditiveChannel::new(CyclicDistribution::new(plan.noise.clone())?)?;
    let q = channel.q();
    let (cs, choice) = match &plan.cs {
        Some(cs) => (cs.clone(), "given"),
        None => (vec![two_optimal_kernel(channel.noise())?.c()], "auto"),
    };
    if let Some(c) = cs.iter().find(|&&c| c % q == 0) {
        return Err(CliError::usage(format!("kernel coefficient {c} is zero in F_{q}")));
    }
    let mut blocks = Vec::new();
    for c in cs {
        let profile = profile_for(a, &channel, &plan, c)?;
        let points = bler_curve_with_profile(
            &channel,
            &profile,
            &plan.rates,
            plan.decode_trials,
            a.seed ^ DECODE_SEED_OFFSET,
        )?;
        let mut text = comment_header(&[
            ("seed", a.seed.to_string()),
            ("q", q.to_string()),
            ("noise", join(&plan.noise, ",")),
            ("noise_digest", channel.digest()),
            ("n", plan.n.to_string()),
            ("c", c.to_string()),
            ("kernel", choice.to_string()),
            ("construct_trials", plan.construct_trials.to_string()),
            ("decode_trials", plan.decode_trials.to_string()),
            ("zero_error_indices", profile.zero_count_indices().to_string()),
        ]);
        text.push_str(&bler_csv(&points));
        blocks.push(Block {
            tag: Some(format!("c{c}")),
            text,
        });
    }
    Ok(blocks)
}

// ---- martingale and spread ----

fn channel_family(spec: &str, c: u32) -> CliResult<ChannelFamily> {
    let (kind, arg) = spec.split_once(':').ok_or_else(|| {
        CliError::usage(format!("family `{spec}`: expected bec:ε, bsc:p or channel:ROWS"))
    })?;
    let number = |s: &str| -> CliResult<f64> {
        s.trim()
            .parse()
            .map_err(|_| CliError::usage(format!("family `{spec}`: `{s}` is not a number")))
    };
    Ok(match kind {
        "bec" => ChannelFamily::Erasure(number(arg)?),
        "bsc" => ChannelFamily::Explicit {
            channel: FiniteChannel::bsc(number(arg)?)?,
            c,
        },
        "channel" => ChannelFamily::Explicit {
            channel: FiniteChannel::new(parse::channel_rows(arg)?)?,
            c,
        },
        _ => {
            return Err(CliError::usage(format!(
                "family `{spec}`: unknown kind `{kind}`, expected bec, bsc or channel"
            )))
        }
    })
}

fn martingale(a: &MartingaleArgs) -> CliResult<Vec<Block>> {
    let family = channel_family(&a.family, a.c)?;
    let paths = martingale_sample(&family, a.depth, a.paths, a.seed)?;
    let mut out = comment_header(&[
        ("seed", a.seed.to_string()),
        ("family", a.family.clone()),
        ("c", a.c.to_string()),
        ("depth", a.depth.to_string()),
        ("paths", a.paths.to_string()),
    ]);
    out.push_str(&martingale_csv(&paths));
    Ok(Block::plain(out))
}

fn spread_plot(a: &SpreadArgs) -> CliResult<Vec<Block>> {
    let (sampler, name) = match a.family {
        SpreadFamily::Bec => (Sampler::BecSweep, "bec"),
        SpreadFamily::Bsc => (Sampler::BscSweep, "bsc"),
        SpreadFamily::Random => (Sampler::RandomBinary, "random"),
    };
    let points = spread_scatter(sampler, a.points, a.seed)?;
    let mut out = comment_header(&[
        ("seed", a.seed.to_string()),
        ("family", name.to_string()),
        ("points", a.points.to_string()),
    ]);
    out.push_str(&scatter_csv(&points));
    Ok(Block::plain(out))
}
