use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Duration;

use thiserror::Error;

use crate::elimination::EliminationOptions;
use crate::interpolation::InterpolationOptions;
use crate::preprocess::Stage;
use crate::prover::ProverConfig;
use crate::syntax::{print_expr, Expr};

/// Environment variable read as the system-default timeout in milliseconds.
pub const TIMEOUT_ENV: &str = "PIE_TIMEOUT_MS";

const KEYS: [&str; 11] = [
    "printing",
    "r",
    "simp_result",
    "elim_options",
    "ip_dotgraph",
    "ip_simp_sides",
    "timeout",
    "max_depth",
    "max_domain",
    "regularity",
    "branch_bound",
];

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum OptionError {
    #[error("unknown option {0}")]
    UnknownKey(String),
    #[error("bad value for option {key}: {value}")]
    BadValue { key: String, value: String },
    #[error("expected an option list `[key=value, ...]`, found {0}")]
    NotAList(String),
}

/// Directive options keyed by name. Layers combine with [`OptionSet::over`], rightmost wins.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OptionSet(BTreeMap<String, Expr>);

impl OptionSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Reads `[key=value, ...]`.
    pub fn from_expr(e: &Expr) -> Result<OptionSet, OptionError> {
        let Expr::List(items, None) = e else {
            return Err(OptionError::NotAList(print_expr(e)));
        };
        let mut out = OptionSet::new();
        for item in items {
            match item {
                Expr::Compound(eq, kv) if eq == "=" && kv.len() == 2 => {
                    let Expr::Atom(key) = &kv[0] else {
                        return Err(OptionError::NotAList(print_expr(e)));
                    };
                    out.set(key, kv[1].clone())?;
                }
                _ => return Err(OptionError::NotAList(print_expr(e))),
            }
        }
        out.check()?;
        Ok(out)
    }

    /// The system layer: a timeout from [`TIMEOUT_ENV`] when set.
    pub fn system() -> OptionSet {
        let mut out = OptionSet::new();
        if let Some(ms) = std::env::var(TIMEOUT_ENV)
            .ok()
            .filter(|v| v.trim().parse::<u64>().is_ok())
        {
            out.0.insert("timeout".into(), Expr::atom(ms.trim()));
        }
        out
    }

    pub fn set(&mut self, key: &str, value: Expr) -> Result<(), OptionError> {
        if !KEYS.contains(&key) {
            return Err(OptionError::UnknownKey(key.to_string()));
        }
        self.0.insert(key.to_string(), value);
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&Expr> {
        self.0.get(key)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `self` overridden by `top`.
    pub fn over(&self, top: &OptionSet) -> OptionSet {
        let mut out = self.clone();
        out.0
            .extend(top.0.iter().map(|(k, v)| (k.clone(), v.clone())));
        out
    }

    /// Validates every typed value.
    pub fn check(&self) -> Result<(), OptionError> {
        self.printing()?;
        self.simp_result()?;
        self.pre()?;
        self.simp_sides()?;
        self.prover()?;
        self.branch_bound()?;
        self.dotgraph()?;
        Ok(())
    }

    fn bad(&self, key: &str) -> OptionError {
        OptionError::BadValue {
            key: key.into(),
            value: self.0.get(key).map(print_expr).unwrap_or_default(),
        }
    }

    fn flag(&self, key: &str, default: bool) -> Result<bool, OptionError> {
        match self.0.get(key) {
            None => Ok(default),
            Some(Expr::Atom(a)) if a == "true" => Ok(true),
            Some(Expr::Atom(a)) if a == "false" => Ok(false),
            Some(_) => Err(self.bad(key)),
        }
    }

    fn number(&self, key: &str) -> Result<Option<u64>, OptionError> {
        match self.0.get(key) {
            None => Ok(None),
            Some(Expr::Atom(a)) => a.parse().map(Some).map_err(|_| self.bad(key)),
            Some(_) => Err(self.bad(key)),
        }
    }

    fn stages(&self, key: &str, value: Option<&Expr>) -> Result<Vec<Stage>, OptionError> {
        let bad = || OptionError::BadValue {
            key: key.into(),
            value: value.map(print_expr).unwrap_or_default(),
        };
        match value {
            None => Ok(Vec::new()),
            Some(Expr::List(items, None)) => items
                .iter()
                .map(|i| match i {
                    Expr::Atom(n) => Stage::from_name(n).ok_or_else(bad),
                    _ => Err(bad()),
                })
                .collect(),
            Some(_) => Err(bad()),
        }
    }

    pub fn printing(&self) -> Result<bool, OptionError> {
        self.flag("printing", true)
    }

    pub fn simp_sides(&self) -> Result<bool, OptionError> {
        self.flag("ip_simp_sides", true)
    }

    pub fn simp_result(&self) -> Result<Vec<Stage>, OptionError> {
        self.stages("simp_result", self.0.get("simp_result"))
    }

    /// The `pre` entry of `elim_options`.
    pub fn pre(&self) -> Result<Vec<Stage>, OptionError> {
        let Some(eo) = self.0.get("elim_options") else {
            return Ok(Vec::new());
        };
        let Expr::List(items, None) = eo else {
            return Err(self.bad("elim_options"));
        };
        let mut pre = None;
        for item in items {
            match item {
                Expr::Compound(eq, kv)
                    if eq == "=" && kv.len() == 2 && kv[0] == Expr::atom("pre") =>
                {
                    pre = Some(&kv[1])
                }
                _ => return Err(self.bad("elim_options")),
            }
        }
        self.stages("elim_options", pre)
    }

    /// Name of the result binding given with `r`.
    pub fn result_name(&self) -> Option<String> {
        match self.0.get("r")? {
            Expr::Var(v) | Expr::Atom(v) => Some(v.clone()),
            _ => None,
        }
    }

    pub fn timeout(&self) -> Result<Option<Duration>, OptionError> {
        Ok(self.number("timeout")?.map(Duration::from_millis))
    }

    pub fn branch_bound(&self) -> Result<Option<usize>, OptionError> {
        Ok(self.number("branch_bound")?.map(|n| n as usize))
    }

    pub fn prover(&self) -> Result<ProverConfig, OptionError> {
        let mut cfg = ProverConfig::default();
        if let Some(t) = self.timeout()? {
            cfg.timeout = t;
        }
        if let Some(d) = self.number("max_depth")? {
            cfg.max_depth = d as usize;
        }
        if let Some(d) = self.number("max_domain")? {
            cfg.max_domain = d as usize;
        }
        cfg.regularity = self.flag("regularity", cfg.regularity)?;
        Ok(cfg)
    }

    pub fn elimination(&self) -> Result<EliminationOptions, OptionError> {
        let mut opts = EliminationOptions {
            pre: self.pre()?,
            simp_result: self.simp_result()?,
            ..EliminationOptions::default()
        };
        if let Some(t) = self.timeout()? {
            opts.timeout = t;
        }
        if let Some(b) = self.branch_bound()? {
            opts.branch_bound = b;
        }
        Ok(opts)
    }

    pub fn interpolation(&self) -> Result<InterpolationOptions, OptionError> {
        Ok(InterpolationOptions {
            simp_sides: self.simp_sides()?,
            prover: self.prover()?,
        })
    }

    /// Target of `ip_dotgraph`, given as a path or wrapped as in `printstyle(Path)`.
    /// The DOT text is written next to it with the extension `dot`.
    pub fn dotgraph(&self) -> Result<Option<PathBuf>, OptionError> {
        let path = match self.0.get("ip_dotgraph") {
            None => return Ok(None),
            Some(Expr::Atom(p)) => p,
            Some(Expr::Compound(_, args)) if args.len() == 1 => match &args[0] {
                Expr::Atom(p) => p,
                _ => return Err(self.bad("ip_dotgraph")),
            },
            Some(_) => return Err(self.bad("ip_dotgraph")),
        };
        Ok(Some(PathBuf::from(path).with_extension("dot")))
    }
}
