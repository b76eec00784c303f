use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use circuit_forge::circuit::CircuitError;
use circuit_forge::codec::{self, CcodeError, DecodeOrigin};
use circuit_forge::evo::{self, FamilyError, HardwireError, Hardwired, ManifestEntry, MemberShape};
use circuit_forge::formula::FormulaError;
use circuit_forge::gadgets;
use circuit_forge::inverse::{self, InverseError, InverseKind, Variant};
use circuit_forge::netlist;
use circuit_forge::transforms::{self, TransformError};
use circuit_forge::{BitString, Cap, Circuit, Formula};

#[derive(Parser)]
#[command(name = "circuit-forge", version, about = "Boolean circuit toolkit")]
struct Cli {
    /// Largest bit count enumerated by exhaustive checks.
    #[arg(long, global = true, env = "CIRCUIT_FORGE_CAP", default_value_t = Cap::DEFAULT)]
    cap: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a circuit on each input, one output per line.
    Eval { circuit: PathBuf, inputs: Vec<BitString> },
    /// Print the full function table as `x y` lines.
    Table { circuit: PathBuf },
    /// Validate a circuit or test one semantic property.
    Check(CheckArgs),
    /// Build a reduction gadget from a formula.
    Gadget(GadgetArgs),
    /// Compile a formula to a one-output circuit.
    Compile {
        #[arg(long)]
        formula: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Apply one padding step.
    Pad(PadArgs),
    /// Run a normalization pipeline.
    Normalize(NormalizeArgs),
    /// Encode a circuit as a bitstring, or as a `.ccode` file with `-o`.
    Encode {
        circuit: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Print the a/b/c/d form instead of bits.
        #[arg(long)]
        quaternary: bool,
    },
    /// Decode a code to a netlist. Decoding is total unless `--strict`.
    Decode {
        #[command(flatten)]
        code: DecodeSource,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Fail with a validation error when the input is not a code.
        #[arg(long)]
        strict: bool,
    },
    /// Universal evaluation `ev(c, x)`.
    Ev {
        #[command(flatten)]
        code: CodeSource,
        input: BitString,
    },
    /// Length-preserving evaluation and hardwiring.
    Evo {
        #[command(subcommand)]
        command: EvoCommand,
    },
    /// Minimal inverse search and inverse checks.
    Invert(InvertArgs),
    /// Minimal-inverse sizes for every small circuit, as CSV.
    Profile(ProfileArgs),
    /// Validate an interleaved family and evaluate it.
    Interleave(InterleaveArgs),
}

#[derive(Args)]
#[group(id = "code", required = true, multiple = false)]
struct CodeSource {
    /// Code given as a 0/1 string.
    #[arg(long, group = "code")]
    bits: Option<String>,
    /// Code read from a `.ccode` file.
    #[arg(long, group = "code")]
    file: Option<PathBuf>,
}

#[derive(Args)]
#[group(id = "source", required = true, multiple = false)]
struct DecodeSource {
    /// Code given as a 0/1 string.
    #[arg(long, group = "source")]
    bits: Option<String>,
    /// Code read from a `.ccode` file.
    #[arg(group = "source")]
    file: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    circuit: PathBuf,
    #[arg(long, value_enum)]
    property: Option<Property>,
    #[arg(long, conflicts_with = "property")]
    injective: bool,
    #[arg(long, conflicts_with_all = ["property", "injective"])]
    surjective: bool,
    #[arg(long, conflicts_with_all = ["property", "injective", "surjective"])]
    identity: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Property {
    Valid,
    Injective,
    Surjective,
    Identity,
}

#[derive(Clone, Copy, ValueEnum)]
enum GadgetKind {
    /// `F_B`: identity exactly when B is a tautology.
    Inj,
    /// `C_B`: surjective exactly when `forall x exists y. B` holds.
    Surj,
}

#[derive(Args)]
struct GadgetArgs {
    #[arg(value_enum)]
    kind: GadgetKind,
    #[arg(long)]
    formula: String,
    /// Universally quantified variables (surj only).
    #[arg(long = "x", value_delimiter = ',')]
    x: Vec<String>,
    /// Existentially quantified variables (surj only).
    #[arg(long = "y", value_delimiter = ',')]
    y: Vec<String>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
#[group(skip)]
#[command(group(ArgGroup::new("step").required(true).args(["identity_wires", "dangling", "zero_outputs", "equalize"])))]
struct PadArgs {
    circuit: PathBuf,
    /// Add this many identity wires.
    #[arg(long)]
    identity_wires: Option<usize>,
    /// Add this many inputs without outgoing edges.
    #[arg(long)]
    dangling: Option<usize>,
    /// Add this many constant-zero outputs.
    #[arg(long)]
    zero_outputs: Option<usize>,
    /// Pad the smaller side until m = n.
    #[arg(long)]
    equalize: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
#[group(skip)]
#[command(group(ArgGroup::new("pipeline").required(true).args(["surjective", "length_preserving"])))]
struct NormalizeArgs {
    circuit: PathBuf,
    #[arg(long)]
    surjective: bool,
    #[arg(long)]
    length_preserving: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum EvoCommand {
    /// Print `ev_o(c, x)` as two lines, `c` then the value.
    Apply {
        #[command(flatten)]
        code: CodeSource,
        input: BitString,
    },
    /// Check length preservation on random `(c, x)` pairs.
    Sample {
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 256)]
        max_code_len: usize,
        #[arg(long, default_value_t = 8)]
        max_input_len: usize,
    },
    /// Fix a prefix of the inputs and write the remaining circuit.
    Hardwire {
        circuit: PathBuf,
        #[arg(long)]
        prefix: BitString,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Semi,
    Mutual,
    Right,
}

impl From<KindArg> for InverseKind {
    fn from(k: KindArg) -> InverseKind {
        match k {
            KindArg::Semi => InverseKind::Semi,
            KindArg::Mutual => InverseKind::Mutual,
            KindArg::Right => InverseKind::Right,
        }
    }
}

#[derive(Args)]
struct InvertArgs {
    circuit: PathBuf,
    /// Largest candidate inverse size.
    #[arg(long, default_value_t = 9)]
    max_size: usize,
    /// Check this circuit as an inverse instead of searching.
    #[arg(long, conflicts_with = "table")]
    check: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "semi")]
    kind: KindArg,
    /// Print the least-preimage semi-inverse table instead of searching.
    #[arg(long)]
    table: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ProfileArgs {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    n: usize,
    /// Largest circuit size profiled.
    #[arg(long)]
    max_size: usize,
    /// Largest inverse size searched; defaults to `--max-size`.
    #[arg(long)]
    inverse_max_size: Option<usize>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct InterleaveArgs {
    /// Manifest of `member <path> <m> <n> <size>` lines.
    #[arg(required_unless_present = "write_toy")]
    manifest: Option<PathBuf>,
    inputs: Vec<BitString>,
    /// Write the two-member toy family into this directory.
    #[arg(long, conflicts_with = "manifest")]
    write_toy: Option<PathBuf>,
}

#[derive(Debug, Error)]
enum Failure {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Cap(String),
    #[error("{0}")]
    Io(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) | Failure::Io(_) => 1,
            Failure::Validation(_) => 2,
            Failure::Cap(_) => 3,
        }
    }
}

impl From<CircuitError> for Failure {
    fn from(e: CircuitError) -> Failure {
        match e {
            CircuitError::TooLarge { .. } => Failure::Cap(e.to_string()),
            _ => Failure::Validation(e.to_string()),
        }
    }
}

impl From<FormulaError> for Failure {
    fn from(e: FormulaError) -> Failure {
        match e {
            FormulaError::TooLarge { .. } => Failure::Cap(e.to_string()),
            _ => Failure::Validation(e.to_string()),
        }
    }
}

impl From<InverseError> for Failure {
    fn from(e: InverseError) -> Failure {
        match e {
            InverseError::Circuit(c) => c.into(),
            InverseError::SizeLimit { .. } => Failure::Cap(e.to_string()),
            _ => Failure::Validation(e.to_string()),
        }
    }
}

impl From<TransformError> for Failure {
    fn from(e: TransformError) -> Failure {
        match e {
            TransformError::Circuit(c) => c.into(),
            _ => Failure::Validation(e.to_string()),
        }
    }
}

impl From<HardwireError> for Failure {
    fn from(e: HardwireError) -> Failure {
        match e {
            HardwireError::Circuit(c) => c.into(),
            _ => Failure::Validation(e.to_string()),
        }
    }
}

impl From<FamilyError> for Failure {
    fn from(e: FamilyError) -> Failure {
        match e {
            FamilyError::Circuit {
                source: CircuitError::TooLarge { .. },
                ..
            } => Failure::Cap(e.to_string()),
            _ => Failure::Validation(e.to_string()),
        }
    }
}

impl From<CcodeError> for Failure {
    fn from(e: CcodeError) -> Failure {
        Failure::Validation(e.to_string())
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

/// Parses and validates a `.circ` file.
fn read_circuit(path: &Path) -> Result<Circuit, Failure> {
    let c = netlist::parse(&read_text(path)?).map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))?;
    let report = c.validate();
    if !report.is_ok() {
        return Err(Failure::Validation(format!("{}: {report}", path.display())));
    }
    Ok(c)
}

fn read_code(bits: &Option<String>, file: &Option<PathBuf>) -> Result<BitString, Failure> {
    match (bits, file) {
        (Some(s), _) => s.parse().map_err(|e| Failure::Usage(format!("--bits: {e}"))),
        (None, Some(path)) => {
            let bytes = fs::read(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            Ok(codec::from_ccode(&bytes)?)
        }
        (None, None) => Err(Failure::Usage("a code is required".into())),
    }
}

/// Writes `text` to `path`, or returns it for stdout.
fn emit(output: Option<&Path>, text: String) -> Result<String, Failure> {
    match output {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn lines<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|i| i.to_string() + "\n").collect()
}

fn var_indices(b: &Formula, names: &[String]) -> Result<Vec<usize>, Failure> {
    names
        .iter()
        .map(|n| {
            b.var_index(n)
                .ok_or_else(|| Failure::Validation(format!("variable {n} does not occur in the formula")))
        })
        .collect()
}

fn run(cli: Cli) -> Result<String, Failure> {
    let cap = Cap(cli.cap);
    match cli.command {
        Command::Eval { circuit, inputs } => {
            let c = read_circuit(&circuit)?;
            let ev = c.evaluator()?;
            let outs = inputs.iter().map(|x| ev.eval(x)).collect::<Result<Vec<_>, _>>()?;
            Ok(lines(outs))
        }
        Command::Table { circuit } => Ok(read_circuit(&circuit)?.function_table(cap)?.to_string()),
        Command::Check(args) => check(args, cap),
        Command::Gadget(args) => {
            let b = Formula::parse(&args.formula)?;
            let c = match args.kind {
                GadgetKind::Inj => gadgets::injectivity_gadget(&b, cap)?,
                GadgetKind::Surj => {
                    let x = var_indices(&b, &args.x)?;
                    let y = var_indices(&b, &args.y)?;
                    gadgets::surjectivity_gadget(&b, &x, &y, cap)?
                }
            };
            emit(args.output.as_deref(), netlist::write(&c))
        }
        Command::Compile { formula, output } => {
            let c = Formula::parse(&formula)?.compile()?;
            emit(output.as_deref(), netlist::write(&c))
        }
        Command::Pad(args) => {
            let c = read_circuit(&args.circuit)?;
            let padded = if let Some(j) = args.identity_wires {
                transforms::add_identity_wires(&c, j)?.0
            } else if let Some(k) = args.dangling {
                transforms::add_dangling_inputs(&c, k)?.0
            } else if let Some(k) = args.zero_outputs {
                transforms::add_zero_outputs(&c, k)?.0
            } else {
                transforms::equalize_io(&c)?.0
            };
            emit(args.output.as_deref(), netlist::write(&padded))
        }
        Command::Normalize(args) => {
            let c = read_circuit(&args.circuit)?;
            let out = if args.surjective {
                transforms::normalize_surjective(&c)?.c2
            } else {
                transforms::normalize_lengthpreserving(&c)?.0
            };
            emit(args.output.as_deref(), netlist::write(&out))
        }
        Command::Encode {
            circuit,
            output,
            quaternary,
        } => {
            let c = read_circuit(&circuit)?;
            match output {
                Some(path) => {
                    fs::write(&path, codec::to_ccode(&codec::encode(&c)))
                        .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
                    Ok(String::new())
                }
                None if quaternary => Ok(format!("{}\n", codec::encode_quaternary(&c))),
                None => Ok(format!("{}\n", codec::encode(&c))),
            }
        }
        Command::Decode { code, output, strict } => {
            let bits = read_code(&code.bits, &code.file)?;
            let c = if strict {
                codec::parse_code(&bits).map_err(|e| Failure::Validation(format!("not a code: {e}")))?
            } else {
                let d = codec::decode_detailed(&bits);
                if d.origin != DecodeOrigin::Code {
                    eprintln!("note: input is not a code; using the {:?} fallback", d.origin);
                }
                d.circuit
            };
            emit(output.as_deref(), netlist::write(&c))
        }
        Command::Ev { code, input } => Ok(format!("{}\n", codec::ev(&read_code(&code.bits, &code.file)?, &input))),
        Command::Evo { command } => evo_command(command),
        Command::Invert(args) => invert(args, cap),
        Command::Profile(args) => {
            let inv_cap = args.inverse_max_size.unwrap_or(args.max_size);
            let p = inverse::hardness_profile(args.m, args.n, args.max_size, inv_cap, cap, args.jobs)?;
            emit(args.output.as_deref(), p.to_csv())
        }
        Command::Interleave(args) => interleave(args, cap),
    }
}

fn check(args: CheckArgs, cap: Cap) -> Result<String, Failure> {
    let property = match (args.property, args.injective, args.surjective, args.identity) {
        (Some(p), ..) => p,
        (None, true, _, _) => Property::Injective,
        (None, _, true, _) => Property::Surjective,
        (None, _, _, true) => Property::Identity,
        _ => Property::Valid,
    };
    if let Property::Valid = property {
        let c = netlist::parse(&read_text(&args.circuit)?).map_err(|e| Failure::Validation(e.to_string()))?;
        let report = c.validate();
        return if report.is_ok() {
            Ok("ok\n".into())
        } else {
            Err(Failure::Validation(report.to_string()))
        };
    }
    let c = read_circuit(&args.circuit)?;
    let answer = match property {
        Property::Injective => c.is_injective(cap)?,
        Property::Surjective => c.is_surjective(cap)?,
        Property::Identity => c.is_identity(cap)?,
        Property::Valid => unreachable!(),
    };
    Ok(format!("{answer}\n"))
}

fn evo_command(command: EvoCommand) -> Result<String, Failure> {
    match command {
        EvoCommand::Apply { code, input } => {
            let (c, y) = evo::ev_o(&read_code(&code.bits, &code.file)?, &input);
            Ok(format!("{c}\n{y}\n"))
        }
        EvoCommand::Sample {
            count,
            seed,
            max_code_len,
            max_input_len,
        } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let random_bits = |rng: &mut ChaCha8Rng, len: usize| -> BitString {
                let mut b = BitString::new();
                for _ in 0..len {
                    b.push(rng.gen());
                }
                b
            };
            let (mut fired, mut violations) = (0usize, 0usize);
            for _ in 0..count {
                let cl = rng.gen_range(0..=max_code_len);
                let xl = rng.gen_range(0..=max_input_len);
                let c = random_bits(&mut rng, cl);
                let x = random_bits(&mut rng, xl);
                let o = evo::ev_o_detailed(&c, &x);
                fired += o.fired as usize;
                violations += (o.code.len() + o.value.len() != cl + xl) as usize;
            }
            Ok(format!("pairs {count}\nfired {fired}\nlength_violations {violations}\n"))
        }
        EvoCommand::Hardwire { circuit, prefix, output } => match evo::hardwire(&read_circuit(&circuit)?, &prefix)? {
            Hardwired::Circuit(c) => emit(output.as_deref(), netlist::write(&c)),
            Hardwired::Constant(y) => {
                eprintln!("note: every input is fixed; printing the constant output");
                Ok(format!("{y}\n"))
            }
        },
    }
}

fn invert(args: InvertArgs, cap: Cap) -> Result<String, Failure> {
    let c = read_circuit(&args.circuit)?;
    if let Some(g_path) = &args.check {
        let f = c.function_table(cap)?;
        let g = read_circuit(g_path)?.function_table(cap)?;
        return Ok(format!("{}\n", inverse::is_inverse(args.kind.into(), &f, &g)?));
    }
    if args.table {
        let g = inverse::canonical_semi_inverse(&c.function_table(cap)?, Variant::Total)?;
        return emit(args.output.as_deref(), g.to_string());
    }
    match inverse::min_inverse_circuit(&c, args.max_size, cap)? {
        Some((g, _)) => emit(args.output.as_deref(), netlist::write(&g)),
        None => Ok("none\n".into()),
    }
}

fn interleave(args: InterleaveArgs, cap: Cap) -> Result<String, Failure> {
    if let Some(dir) = args.write_toy {
        return write_toy(&dir);
    }
    let manifest = args.manifest.expect("clap requires a manifest");
    let entries = evo::parse_manifest(&read_text(&manifest)?).map_err(|e| Failure::Validation(e.to_string()))?;
    let base = manifest.parent().unwrap_or(Path::new("."));
    let mut circuits = Vec::with_capacity(entries.len());
    for e in &entries {
        let c = read_circuit(&base.join(&e.path))?;
        let actual = MemberShape {
            m: c.inputs(),
            n: c.outputs(),
            size: c.size(),
        };
        if actual != e.shape {
            return Err(Failure::Validation(format!(
                "{}: manifest records {} but the circuit has {actual}",
                e.path, e.shape
            )));
        }
        circuits.push(c);
    }
    let family = evo::interleave_family(circuits, cap)?;
    if args.inputs.is_empty() {
        return Ok(lines(family.shapes().iter().map(|s| format!("{} {} {}", s.m, s.n, s.size))));
    }
    Ok(lines(args.inputs.iter().map(|x| family.eval(x))))
}

fn write_toy(dir: &Path) -> Result<String, Failure> {
    let io = |e: std::io::Error| Failure::Io(format!("{}: {e}", dir.display()));
    fs::create_dir_all(dir).map_err(io)?;
    let mut entries = Vec::new();
    for (name, m, n) in [("member1.circ", 3, 1), ("member2.circ", 7, 3)] {
        let c = evo::projection_circuit(m, n)?;
        fs::write(dir.join(name), netlist::write(&c)).map_err(io)?;
        entries.push(ManifestEntry {
            path: name.into(),
            shape: MemberShape { m, n, size: c.size() },
        });
    }
    fs::write(dir.join("family.manifest"), evo::write_manifest(&entries)).map_err(io)?;
    Ok(String::new())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.as_bytes()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
