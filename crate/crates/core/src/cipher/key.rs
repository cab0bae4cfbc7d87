use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::chaos::{Coefficient, EvalOrder, OrbitParams, Precision, RealValue};
use crate::seed::unit_literal;

use super::{CipherError, Partition};

/// Which value seeds the next plaintext unit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ChainMode {
    /// The zoomed arrival `y_N`, the value that was tested against the site.
    #[default]
    Zoomed,
    /// The underlying orbit value `x_N`; the orbit simply continues.
    Underlying,
}

impl fmt::Display for ChainMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChainMode::Zoomed => "zoomed",
            ChainMode::Underlying => "underlying",
        })
    }
}

impl FromStr for ChainMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "zoomed" => Ok(ChainMode::Zoomed),
            "underlying" => Ok(ChainMode::Underlying),
            other => Err(format!("unknown chain mode `{other}`")),
        }
    }
}

/// The raw contents of a key, before validation.
///
/// Real-valued fields are exact decimal literals; they are parsed under
/// `precision` only when the key is built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyFields {
    pub mu: String,
    pub x0: String,
    pub k: u32,
    pub sites: u32,
    pub x_min: String,
    pub x_max: String,
    pub n0: u32,
    pub n_max: u32,
    pub eta: String,
    pub precision: Precision,
    /// `association[v]` is the site of symbol `v`.
    pub association: Vec<u32>,
    pub chain: ChainMode,
    pub order: EvalOrder,
}

impl KeyFields {
    pub const MAX_RETURN: u32 = 65_532;
    pub const MAX_SITES: u32 = 256;

    /// Symbol `v` on site `v`, with symbol 0 on the last site.
    ///
    /// With 256 sites this puts ASCII `h` (104) on site 104, the layout of the
    /// classic worked example.
    pub fn cyclic_association(sites: u32) -> Vec<u32> {
        (0..sites).map(|v| if v == 0 { sites } else { v }).collect()
    }
}

/// A validated key. Immutable; build a new one to change anything.
#[derive(Debug, Clone)]
pub struct CipherKey {
    fields: KeyFields,
    params: OrbitParams,
    partition: Partition,
    /// `symbols[site - 1]` is the symbol on `site`.
    symbols: Vec<u8>,
    eta: f64,
}

impl PartialEq for CipherKey {
    fn eq(&self, other: &Self) -> bool {
        self.fields == other.fields
    }
}

impl CipherKey {
    pub fn new(fields: KeyFields) -> Result<Self, CipherError> {
        let mut errors = Vec::new();
        let p = fields.precision;
        if let Err(e) = p.validate() {
            return Err(CipherError::Validation(vec![e.to_string()]));
        }
        let mut real = |name: &str, text: &str| match RealValue::parse(text, p) {
            Ok(v) => Some(v),
            Err(e) => {
                errors.push(format!("{name}: {e}"));
                None
            }
        };
        let x0 = real("x0", &fields.x0);
        let x_min = real("x_min", &fields.x_min);
        let x_max = real("x_max", &fields.x_max);
        let eta = real("eta", &fields.eta);
        let mu = Coefficient::parse(&fields.mu, p)
            .map_err(|e| errors.push(format!("mu: {e}")))
            .ok();

        if let Some(x0) = &x0 {
            if !x0.in_open_unit() {
                errors.push(format!("x0 = {} must lie in ]0, 1[", fields.x0));
            }
        }
        if let Some(eta) = &eta {
            if eta.to_f64() >= 1.0 {
                errors.push(format!("eta = {} must lie in [0, 1)", fields.eta));
            }
        }
        if fields.k > p.max_zoom() {
            errors.push(format!("k = {} exceeds {} for {p}", fields.k, p.max_zoom()));
        }
        if !(2..=KeyFields::MAX_SITES).contains(&fields.sites) {
            errors.push(format!(
                "S = {} must lie in 2..={}",
                fields.sites,
                KeyFields::MAX_SITES
            ));
        }
        if !(fields.n0 < fields.n_max && fields.n_max <= KeyFields::MAX_RETURN) {
            errors.push(format!(
                "need 0 <= N0 < N_max <= {}, got N0 = {}, N_max = {}",
                KeyFields::MAX_RETURN,
                fields.n0,
                fields.n_max
            ));
        }
        let symbols = check_association(&fields.association, fields.sites, &mut errors);
        let partition = match (&x_min, &x_max) {
            (Some(lo), Some(hi)) if (2..=KeyFields::MAX_SITES).contains(&fields.sites) => {
                match Partition::new(lo, hi, fields.sites) {
                    Ok(part) => Some(part),
                    Err(CipherError::Validation(v)) => {
                        errors.extend(v);
                        None
                    }
                    Err(e) => {
                        errors.push(e.to_string());
                        None
                    }
                }
            }
            _ => None,
        };
        if !errors.is_empty() {
            return Err(CipherError::Validation(errors));
        }
        let params = OrbitParams {
            mu: mu.expect("checked"),
            x0: x0.expect("checked"),
            k: fields.k,
            precision: p,
            order: fields.order,
        };
        Ok(CipherKey {
            eta: eta.expect("checked").to_f64(),
            params,
            partition: partition.expect("checked"),
            symbols: symbols.expect("checked"),
            fields,
        })
    }

    pub fn fields(&self) -> &KeyFields {
        &self.fields
    }

    /// Orbit parameters starting at `x0`.
    pub fn params(&self) -> &OrbitParams {
        &self.params
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn precision(&self) -> Precision {
        self.fields.precision
    }

    pub fn k(&self) -> u32 {
        self.fields.k
    }

    pub fn sites(&self) -> u32 {
        self.fields.sites
    }

    pub fn n0(&self) -> u32 {
        self.fields.n0
    }

    pub fn n_max(&self) -> u32 {
        self.fields.n_max
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn chain(&self) -> ChainMode {
        self.fields.chain
    }

    /// The site a symbol must reach, if the symbol is in the alphabet.
    pub fn site_for(&self, symbol: u8) -> Option<u32> {
        self.fields.association.get(symbol as usize).copied()
    }

    pub fn symbol_for(&self, site: u32) -> Option<u8> {
        let i = (site as usize).checked_sub(1)?;
        self.symbols.get(i).copied()
    }

    /// The same key with other fields; revalidates.
    pub fn with_fields(&self, edit: impl FnOnce(&mut KeyFields)) -> Result<Self, CipherError> {
        let mut fields = self.fields.clone();
        edit(&mut fields);
        CipherKey::new(fields)
    }

    /// Canonical text form. Optional fields appear only when not default.
    pub fn to_text(&self) -> String {
        let f = &self.fields;
        let mut out = String::new();
        let mut line = |name: &str, value: &dyn fmt::Display| {
            out.push_str(&format!("{name} = {value}\n"));
        };
        line("mu", &f.mu);
        line("x0", &f.x0);
        line("k", &f.k);
        line("S", &f.sites);
        line("x_min", &f.x_min);
        line("x_max", &f.x_max);
        line("N0", &f.n0);
        line("N_max", &f.n_max);
        line("eta", &f.eta);
        line("precision", &f.precision);
        if f.chain != ChainMode::default() {
            line("chain", &f.chain);
        }
        if f.order != EvalOrder::default() {
            line("order", &f.order);
        }
        let assoc: Vec<String> = f.association.iter().map(u32::to_string).collect();
        line("association", &assoc.join(","));
        out
    }

    /// Parses `name = value` lines; `#` starts a comment line.
    pub fn parse(text: &str) -> Result<Self, CipherError> {
        let mut seen: Vec<(&str, &str, usize)> = Vec::new();
        let mut last_line = 0;
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            last_line = line_no;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (name, value) = line.split_once('=').ok_or_else(|| CipherError::Parse {
                line: line_no,
                message: format!("expected `name = value`, got `{line}`"),
            })?;
            let (name, value) = (name.trim(), value.trim());
            if !FIELDS.contains(&name) {
                return Err(CipherError::Parse {
                    line: line_no,
                    message: format!("unknown field `{name}`"),
                });
            }
            if seen.iter().any(|(n, _, _)| *n == name) {
                return Err(CipherError::Parse {
                    line: line_no,
                    message: format!("duplicate field `{name}`"),
                });
            }
            seen.push((name, value, line_no));
        }
        let get = |name: &str| -> Result<(&str, usize), CipherError> {
            seen.iter()
                .find(|(n, _, _)| *n == name)
                .map(|(_, v, l)| (*v, *l))
                .ok_or_else(|| CipherError::Parse {
                    line: last_line,
                    message: format!("missing field `{name}`"),
                })
        };
        fn num<T: FromStr>((value, line): (&str, usize), name: &str) -> Result<T, CipherError> {
            value.parse().map_err(|_| CipherError::Parse {
                line,
                message: format!("`{name}` must be a non-negative integer, got `{value}`"),
            })
        }
        let text_field = |name: &str| get(name).map(|(v, _)| v.to_string());

        let (prec, prec_line) = get("precision")?;
        let precision = prec.parse().map_err(|e: crate::chaos::ChaosError| CipherError::Parse {
            line: prec_line,
            message: e.to_string(),
        })?;
        let chain = match seen.iter().find(|(n, _, _)| *n == "chain") {
            Some((_, v, line)) => v.parse().map_err(|message| CipherError::Parse {
                line: *line,
                message,
            })?,
            None => ChainMode::default(),
        };
        let order = match seen.iter().find(|(n, _, _)| *n == "order") {
            Some((_, v, line)) => v.parse().map_err(|e: crate::chaos::ChaosError| {
                CipherError::Parse {
                    line: *line,
                    message: e.to_string(),
                }
            })?,
            None => EvalOrder::default(),
        };
        let (assoc, assoc_line) = get("association")?;
        let association = assoc
            .split(',')
            .map(|s| num::<u32>((s.trim(), assoc_line), "association"))
            .collect::<Result<Vec<_>, _>>()?;

        CipherKey::new(KeyFields {
            mu: text_field("mu")?,
            x0: text_field("x0")?,
            k: num(get("k")?, "k")?,
            sites: num(get("S")?, "S")?,
            x_min: text_field("x_min")?,
            x_max: text_field("x_max")?,
            n0: num(get("N0")?, "N0")?,
            n_max: num(get("N_max")?, "N_max")?,
            eta: text_field("eta")?,
            precision,
            association,
            chain,
            order,
        })
    }
}

const FIELDS: [&str; 13] = [
    "mu", "x0", "k", "S", "x_min", "x_max", "N0", "N_max", "eta", "precision", "association",
    "chain", "order",
];

fn check_association(assoc: &[u32], sites: u32, errors: &mut Vec<String>) -> Option<Vec<u8>> {
    if assoc.len() != sites as usize {
        errors.push(format!(
            "association lists {} sites, expected S = {sites}",
            assoc.len()
        ));
        return None;
    }
    let mut symbols = vec![None; sites as usize];
    for (symbol, &site) in assoc.iter().enumerate() {
        if site == 0 || site > sites {
            errors.push(format!("association: site {site} is outside 1..={sites}"));
            return None;
        }
        let slot = &mut symbols[site as usize - 1];
        if slot.is_some() {
            errors.push(format!("association is not a bijection: site {site} repeats"));
            return None;
        }
        *slot = Some(symbol as u8);
    }
    symbols.into_iter().collect()
}

impl fmt::Display for CipherKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for CipherKey {
    type Err = CipherError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CipherKey::parse(s)
    }
}

/// Fields to force in [`keygen`]; `None` keeps the default or the random draw.
#[derive(Debug, Clone, Default)]
pub struct KeyOverrides {
    pub mu: Option<String>,
    pub x0: Option<String>,
    pub k: Option<u32>,
    pub sites: Option<u32>,
    pub x_min: Option<String>,
    pub x_max: Option<String>,
    pub n0: Option<u32>,
    pub n_max: Option<u32>,
    pub eta: Option<String>,
    pub precision: Option<Precision>,
    pub association: Option<Vec<u32>>,
    pub chain: Option<ChainMode>,
    pub order: Option<EvalOrder>,
}

/// Digits in a generated `x0`.
const X0_DIGITS: usize = 24;

/// A fresh key with a random `x0` and a random association.
///
/// Defaults: `μ = 3.99999`, `S = 256` over `[0.2, 0.8)`, `N0 = 250`,
/// `N_max = 65532`, `η = 0`, `k = 4`, 128-digit decimal arithmetic.
pub fn keygen(seed: u64, overrides: &KeyOverrides) -> Result<CipherKey, CipherError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let o = overrides.clone();
    let sites = o.sites.unwrap_or(256);
    let x0 = unit_literal(&mut rng, X0_DIGITS);
    let association = o.association.unwrap_or_else(|| {
        let mut a: Vec<u32> = (1..=sites).collect();
        a.shuffle(&mut rng);
        a
    });
    CipherKey::new(KeyFields {
        mu: o.mu.unwrap_or_else(|| "3.99999".into()),
        x0: o.x0.unwrap_or(x0),
        k: o.k.unwrap_or(4),
        sites,
        x_min: o.x_min.unwrap_or_else(|| "0.2".into()),
        x_max: o.x_max.unwrap_or_else(|| "0.8".into()),
        n0: o.n0.unwrap_or(250),
        n_max: o.n_max.unwrap_or(KeyFields::MAX_RETURN),
        eta: o.eta.unwrap_or_else(|| "0".into()),
        precision: o.precision.unwrap_or_else(Precision::default_decimal),
        association,
        chain: o.chain.unwrap_or_default(),
        order: o.order.unwrap_or_default(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hi_fields() -> KeyFields {
        KeyFields {
            mu: "3.8".into(),
            x0: "0.232323".into(),
            k: 0,
            sites: 256,
            x_min: "0.2".into(),
            x_max: "0.8".into(),
            n0: 250,
            n_max: 65532,
            eta: "0".into(),
            precision: Precision::Binary64,
            association: KeyFields::cyclic_association(256),
            chain: ChainMode::Zoomed,
            order: EvalOrder::ScaledFirst,
        }
    }

    #[test]
    fn hi_key_is_valid() {
        let key = CipherKey::new(hi_fields()).unwrap();
        assert_eq!(key.site_for(b'h'), Some(104));
        assert_eq!(key.site_for(0), Some(256));
        assert_eq!(key.symbol_for(105), Some(b'i'));
        assert_eq!(key.symbol_for(0), None);
        assert_eq!(key.eta(), 0.0);
    }

    #[test]
    fn text_round_trip() {
        let key = CipherKey::new(hi_fields()).unwrap();
        let text = key.to_text();
        let again = CipherKey::parse(&text).unwrap();
        assert_eq!(again, key);
        assert_eq!(again.to_text(), text);
        let key = keygen(9, &KeyOverrides::default()).unwrap();
        let text = key.to_text();
        assert_eq!(CipherKey::parse(&text).unwrap().to_text(), text);
    }

    #[test]
    fn optional_fields_round_trip() {
        let mut f = hi_fields();
        f.chain = ChainMode::Underlying;
        f.order = EvalOrder::ProductFirst;
        let key = CipherKey::new(f).unwrap();
        let text = key.to_text();
        assert!(text.contains("chain = underlying\n"));
        assert!(text.contains("order = product_first\n"));
        assert_eq!(CipherKey::parse(&text).unwrap(), key);
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = format!("# a key\n\n{}", CipherKey::new(hi_fields()).unwrap());
        assert!(CipherKey::parse(&text).is_ok());
    }

    #[test]
    fn missing_field_is_a_parse_error() {
        let text = CipherKey::new(hi_fields()).unwrap().to_text();
        let without: String = text.lines().filter(|l| !l.starts_with("x0")).map(|l| format!("{l}\n")).collect();
        match CipherKey::parse(&without) {
            Err(CipherError::Parse { message, .. }) => assert!(message.contains("x0")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let text = CipherKey::new(hi_fields()).unwrap().to_text();
        let bad = text.replace("k = 0", "k = zero");
        assert!(matches!(CipherKey::parse(&bad), Err(CipherError::Parse { line: 3, .. })));
        let bad = format!("{text}colour = blue\n");
        assert!(matches!(CipherKey::parse(&bad), Err(CipherError::Parse { line: 12, .. })));
        let bad = format!("{text}mu = 3.9\n");
        assert!(matches!(CipherKey::parse(&bad), Err(CipherError::Parse { .. })));
        assert!(matches!(CipherKey::parse("just text"), Err(CipherError::Parse { line: 1, .. })));
    }

    #[test]
    fn repeated_site_is_rejected() {
        let mut f = hi_fields();
        f.association[1] = f.association[2];
        let text = format!(
            "{}association = {}\n",
            CipherKey::new(hi_fields()).unwrap().to_text().lines().filter(|l| !l.starts_with("association")).map(|l| format!("{l}\n")).collect::<String>(),
            f.association.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
        );
        match CipherKey::parse(&text) {
            Err(CipherError::Validation(v)) => assert!(v[0].contains("bijection"), "{v:?}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn validation_lists_every_violation() {
        let mut f = hi_fields();
        f.mu = "4.2".into();
        f.x0 = "1.5".into();
        f.n0 = 70_000;
        f.eta = "1".into();
        match CipherKey::new(f) {
            Err(CipherError::Validation(v)) => assert_eq!(v.len(), 4, "{v:?}"),
            other => panic!("{other:?}"),
        }
        let mut f = hi_fields();
        f.sites = 300;
        assert!(CipherKey::new(f).is_err());
        let mut f = hi_fields();
        f.k = 16;
        assert!(CipherKey::new(f).is_err());
        let mut f = hi_fields();
        f.x_min = "0.8".into();
        f.x_max = "0.2".into();
        assert!(CipherKey::new(f).is_err());
    }

    #[test]
    fn keygen_is_deterministic() {
        let a = keygen(42, &KeyOverrides::default()).unwrap();
        let b = keygen(42, &KeyOverrides::default()).unwrap();
        assert_eq!(a.to_text(), b.to_text());
        assert_ne!(a.to_text(), keygen(43, &KeyOverrides::default()).unwrap().to_text());
        assert_eq!(a.fields().mu, "3.99999");
        assert_eq!(a.k(), 4);
        assert_eq!(a.precision(), Precision::Decimal(128));
    }

    #[test]
    fn keygen_overrides_are_validated() {
        let o = KeyOverrides {
            mu: Some("4.2".into()),
            ..Default::default()
        };
        assert!(matches!(keygen(1, &o), Err(CipherError::Validation(_))));
        let o = KeyOverrides {
            sites: Some(16),
            precision: Some(Precision::Binary64),
            k: Some(2),
            ..Default::default()
        };
        let key = keygen(1, &o).unwrap();
        assert_eq!(key.fields().association.len(), 16);
    }
}
