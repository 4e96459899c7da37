use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use serde_json::{json, Value};

use qunip::braid::Sign;
use qunip::crystal::{extend_to_longest, CrystalElt, CrystalEngine};
use qunip::dualbasis::{single_q_power, LusztigData, PbwBasis, PbwContext, PbwVector};
use qunip::minors;
use qunip::rootdata::{ReducedWord, RootDatum, RootVec, Weight};
use qunip::scalars::ScalarQ;
use qunip::wordalg::{UqMinus, WordElt};

use crate::error::CliError;
use crate::{BasisArg, Cmd, Common};

pub struct Setup {
    pub datum: RootDatum,
    pub uq: Arc<UqMinus>,
    pub word: Option<ReducedWord>,
    pub sign: Sign,
}

pub struct Output {
    pub json: Value,
    pub table: String,
    pub passed: bool,
}

impl Output {
    fn ok(json: Value, table: String) -> Output {
        Output { json, table, passed: true }
    }
}

impl Setup {
    pub fn new(common: &Common, cmd: &Cmd) -> Result<Setup, CliError> {
        let datum = match (&common.preset, &common.datum_file) {
            (Some(p), None) => RootDatum::preset(p)?,
            (None, Some(path)) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::validation(format!("cannot read {}: {e}", path.display())))?;
                RootDatum::from_json(&text)?
            }
            _ => return Err(CliError::usage("exactly one of --type and --datum-file is required")),
        };
        let word = common.word.as_deref().map(|w| ReducedWord::parse(&datum, w)).transpose()?;
        let default_sign = match cmd {
            Cmd::Minors { .. } | Cmd::Seed => Sign::Minus,
            _ => Sign::Plus,
        };
        let sign = match &common.sign {
            Some(s) => s.parse::<Sign>().map_err(|_| CliError::usage(format!("--sign must be +1 or -1, got `{s}`")))?,
            None => default_sign,
        };
        let uq = Arc::new(UqMinus::with_height_bound(datum.clone(), common.height));
        Ok(Setup { datum, uq, word, sign })
    }

    pub fn fingerprint(&self) -> String {
        let letters = self.word.as_ref().map(|w| w.to_one_based()).unwrap_or_default();
        format!("{}|{:?}|{}", self.datum.to_json(), letters, self.sign)
    }

    fn word(&self) -> Result<&ReducedWord, CliError> {
        self.word.as_ref().ok_or_else(|| CliError::usage("this subcommand needs --word"))
    }

    fn context(&self) -> Result<PbwContext, CliError> {
        Ok(PbwContext::new(self.uq.clone(), self.word()?.clone(), self.sign))
    }

    fn data(&self, text: &str) -> Result<LusztigData, CliError> {
        let c: LusztigData = text.parse().map_err(CliError::validation)?;
        let l = self.word()?.len();
        if c.len() != l {
            return Err(CliError::validation(format!("Lusztig datum {c} has length {}, expected {l}", c.len())));
        }
        Ok(c)
    }
}

pub fn execute(s: &Setup, cmd: &Cmd) -> Result<Output, CliError> {
    match cmd {
        Cmd::Gram { matrices } => gram(s, *matrices),
        Cmd::Pbw { c } => {
            let ctx = s.context()?;
            Ok(word_elt(&ctx.monomial(&s.data(c)?)?))
        }
        Cmd::Rootvec { k, power } => {
            let ctx = s.context()?;
            if *k == 0 || *k > ctx.len() {
                return Err(CliError::validation(format!("position {k} is outside 1..={}", ctx.len())));
            }
            Ok(word_elt(&ctx.root_vector(k - 1, *power)?))
        }
        Cmd::Dcb { c } => {
            let ctx = s.context()?;
            Ok(pbw_vector(&ctx.dual_canonical(&s.data(c)?)?.coords))
        }
        Cmd::Straighten { j, k, cj, ck, basis } => {
            let ctx = s.context()?;
            let basis = match basis {
                BasisArg::Pbw => PbwBasis::Pbw,
                BasisArg::DualPbw => PbwBasis::DualPbw,
            };
            Ok(pbw_vector(&ctx.straighten(*j, *k, *cj, *ck, basis)?))
        }
        Cmd::Product { c1, c2 } => product(s, c1, c2, false),
        Cmd::Compat { c1, c2 } => product(s, c1, c2, true),
        Cmd::Minors { check_qcommute, check_factor, degree } => {
            minors_report(s, *check_qcommute, *check_factor, *degree)
        }
        Cmd::Seed => {
            let rec = minors::export_seed(&s.context()?)?;
            let mut table = String::new();
            for (k, c) in rec.minors.iter().enumerate() {
                let frozen = if rec.frozen.contains(&(k + 1)) { " frozen" } else { "" };
                let _ = writeln!(table, "Δ_{}\t{c}{frozen}", k + 1);
            }
            table.push_str(&matrix_table(&rec.lambda_matrix));
            Ok(Output::ok(serde_json::to_value(&rec).expect("json"), table))
        }
        Cmd::Crystal { c, ops } => crystal(s, c.as_deref(), ops),
    }
}

fn coord_rows(coords: &BTreeMap<LusztigData, ScalarQ>) -> (Value, String) {
    let mut table = String::new();
    let rows: Vec<Value> = coords
        .iter()
        .map(|(c, v)| {
            let _ = writeln!(table, "{c}\t{v}");
            json!({"c": c, "coeff": v})
        })
        .collect();
    (Value::Array(rows), table)
}

fn word_elt(x: &WordElt) -> Output {
    let mut table = String::new();
    for (w, c) in x.terms() {
        let letters: Vec<String> = w.iter().map(|&l| (l as usize + 1).to_string()).collect();
        let _ = writeln!(table, "[{}]\t{c}", letters.join(","));
    }
    Output::ok(serde_json::to_value(x).expect("json"), table)
}

fn pbw_vector(v: &PbwVector) -> Output {
    let (_, table) = coord_rows(&v.coords);
    Output::ok(serde_json::to_value(v).expect("json"), table)
}

fn product(s: &Setup, c1: &str, c2: &str, compat: bool) -> Result<Output, CliError> {
    let ctx = s.context()?;
    let b1 = ctx.dual_canonical(&s.data(c1)?)?;
    let b2 = ctx.dual_canonical(&s.data(c2)?)?;
    let exp = ctx.expand_product(&b1, &b2)?;
    let (rows, mut table) = coord_rows(&exp);
    let mut json = json!({"context": ctx.info(), "basis": "dual_canonical", "coords": rows});
    if compat {
        let single = single_q_power(&exp);
        let _ = writeln!(table, "compatible\t{}", single.is_some());
        json["compatible"] = json!(single.is_some());
        json["leading"] = match single {
            Some((c, k)) => json!({"c": c, "q_exponent": k}),
            None => Value::Null,
        };
    }
    Ok(Output::ok(json, table))
}

/// All degrees Σ n_i α_i of the given height.
fn degrees_of_height(rank: usize, h: i64) -> Vec<RootVec> {
    fn rec(rank: usize, left: i64, cur: &mut Vec<i64>, out: &mut Vec<RootVec>) {
        if cur.len() + 1 == rank {
            cur.push(left);
            out.push(RootVec(cur.clone()));
            cur.pop();
            return;
        }
        for v in (0..=left).rev() {
            cur.push(v);
            rec(rank, left - v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(rank, h, &mut Vec::new(), &mut out);
    out
}

fn gram(s: &Setup, matrices: bool) -> Result<Output, CliError> {
    let base = s.word.clone().unwrap_or_else(|| ReducedWord::new(&s.datum, &[]).expect("empty word"));
    let ctx = extend_to_longest(&s.datum, &base).map(|w| PbwContext::new(s.uq.clone(), w, s.sign));
    let bound = s.uq.height_bound().unwrap_or(8);
    let mut rows = Vec::new();
    let mut table = String::from("degree\twords\trank\tpbw\n");
    let mut all_match = true;
    for h in 1..=bound {
        for deg in degrees_of_height(s.datum.rank(), h) {
            let basis = s.uq.weight_basis(&deg)?;
            let words = s.uq.space(&deg).len();
            let pbw = ctx.as_ref().map(|c| c.pbw_count(&deg));
            all_match &= pbw.is_none_or(|p| p == basis.dim());
            let shown = pbw.map_or("-".to_string(), |p| p.to_string());
            let _ = writeln!(table, "{deg}\t{words}\t{}\t{shown}", basis.dim());
            let mut row = json!({"degree": deg.0, "height": h, "words": words, "rank": basis.dim(), "pbw_count": pbw});
            if matrices {
                let pivots: Vec<Vec<usize>> =
                    basis.pivots().iter().map(|w| w.iter().map(|&l| l as usize + 1).collect()).collect();
                row["pivots"] = json!(pivots);
                row["gram"] = json!(basis.gram());
            }
            rows.push(row);
        }
    }
    let _ = writeln!(table, "all ranks match PBW counts: {all_match}");
    Ok(Output { json: json!({"weights": rows, "all_match": all_match}), table, passed: all_match })
}

fn matrix_table(m: &[Vec<i64>]) -> String {
    let mut out = String::new();
    for row in m {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:>3}")).collect();
        let _ = writeln!(out, "{}", cells.join(" "));
    }
    out
}

fn minors_report(s: &Setup, check_qcommute: bool, check_factor: bool, degree: u32) -> Result<Output, CliError> {
    let ctx = s.context()?;
    let seed = minors::export_seed(&ctx)?;
    let mut table = String::new();
    let mut passed = true;
    let mut json = json!({
        "minors": seed.minors,
        "frozen": seed.frozen,
        "lambda_matrix": seed.lambda_matrix,
    });
    let _ = writeln!(table, "Λ =\n{}", matrix_table(&seed.lambda_matrix).trim_end());

    json["qcommute"] = if check_qcommute {
        let (ok, measured) = match minors::measured_lambda_matrix(&ctx) {
            Ok(m) => (m == seed.lambda_matrix, json!(m)),
            Err(e) => (false, json!(e.to_string())),
        };
        passed &= ok;
        let _ = writeln!(table, "q-commutation measured = N: {ok}");
        json!({"passed": ok, "measured": measured})
    } else {
        Value::Null
    };

    let compat = minors::check_strong_compatibility(&ctx, degree)?;
    passed &= compat.passed();
    let _ = writeln!(
        table,
        "strong compatibility up to degree {degree}: {} of {} monomials fail",
        compat.failures.len(),
        compat.checked
    );
    json["strong_compatibility"] =
        json!({"degree": degree, "checked": compat.checked, "failures": compat.failures, "passed": compat.passed()});

    let rank = s.datum.rank();
    let mut extremal = Vec::new();
    for i in 0..rank {
        for j in 0..rank {
            let (l, m) = (Weight::fundamental(rank, i), Weight::fundamental(rank, j));
            let holds = minors::check_extremal_identity(&ctx, &l, &m)?;
            passed &= holds;
            let _ = writeln!(table, "extremal ϖ{} ϖ{}: {holds}", i + 1, j + 1);
            extremal.push(json!({"lambda": l.0, "mu": m.0, "holds": holds}));
        }
    }
    json["extremal"] = json!(extremal);

    json["factorization"] = if check_factor {
        let data = LusztigData::all_up_to(ctx.len(), degree);
        let mut failures = Vec::new();
        for c in &data {
            if minors::check_factorization(&ctx, c)?.is_none() {
                failures.push(c.clone());
            }
        }
        passed &= failures.is_empty();
        let _ = writeln!(table, "factorization for |c| <= {degree}: {} of {} fail", failures.len(), data.len());
        json!({"checked": data.len(), "failures": failures, "passed": failures.is_empty()})
    } else {
        Value::Null
    };
    json["passed"] = json!(passed);
    let _ = writeln!(table, "passed: {passed}");
    Ok(Output { json, table, passed })
}

#[derive(Debug, PartialEq, Eq)]
enum Op {
    E { star: bool, i: usize, n: i64 },
    F { star: bool, i: usize, n: i64 },
}

impl std::fmt::Display for Op {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let (k, star, i, n) = match *self {
            Op::E { star, i, n } => ('e', star, i, n),
            Op::F { star, i, n } => ('f', star, i, n),
        };
        write!(f, "{k}{}{}", if star { "*" } else { "" }, i + 1)?;
        if n != 1 {
            write!(f, "^{n}")?;
        }
        Ok(())
    }
}

fn parse_ops(text: &str, rank: usize) -> Result<Vec<Op>, CliError> {
    let mut ops = Vec::new();
    for tok in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let bad = || {
            CliError::validation(format!(
                "bad crystal operator `{tok}`; expected e<i>, f<i>, e*<i>, f*<i>, optionally ^n"
            ))
        };
        let (head, n) = match tok.split_once('^') {
            Some((h, n)) => (h, n.parse::<i64>().map_err(|_| bad())?),
            None => (tok, 1),
        };
        let (kind, rest) = head.split_at(1);
        let (star, idx) = match rest.strip_prefix('*') {
            Some(r) => (true, r),
            None => (false, rest),
        };
        let i: usize = idx.parse().map_err(|_| bad())?;
        if i == 0 || i > rank || n < 0 {
            return Err(bad());
        }
        ops.push(match kind {
            "e" => Op::E { star, i: i - 1, n },
            "f" => Op::F { star, i: i - 1, n },
            _ => return Err(bad()),
        });
    }
    Ok(ops)
}

fn crystal(s: &Setup, c: Option<&str>, ops: &str) -> Result<Output, CliError> {
    let word = s.word()?;
    let engine = CrystalEngine::new(s.uq.clone(), word, s.sign)?;
    let ops = parse_ops(ops, s.datum.rank())?;
    let start = match c {
        Some(t) => engine.element(&s.data(t)?)?,
        None => engine.u_inf(),
    };
    let mut table = String::new();
    let mut steps = Vec::new();
    let mut cur: Option<CrystalElt> = Some(start.clone());
    for op in &ops {
        let Some(b) = cur.take() else { break };
        cur = match *op {
            Op::E { star: false, i, n } => engine.etilde_n(i, n, &b)?,
            Op::E { star: true, i, n } => engine.etilde_star_n(i, n, &b)?,
            Op::F { star: false, i, n } => Some(engine.ftilde_n(i, n, &b)?),
            Op::F { star: true, i, n } => Some(engine.ftilde_star_n(i, n, &b)?),
        };
        let label = op.to_string();
        let _ = writeln!(table, "{label}\t{}", cur.as_ref().map_or("0".to_string(), |b| b.c.to_string()));
        steps.push(json!({"op": label, "result": cur.as_ref().map(|b| &b.c)}));
    }
    let mut json = json!({"start": start.c, "steps": steps});
    match &cur {
        Some(b) => {
            let stats = engine.stats(b)?;
            let phi: Vec<Option<i64>> = (0..s.datum.rank()).map(|i| stats.phi(i)).collect();
            let eps_star: Vec<i64> = (0..s.datum.rank()).map(|i| engine.eps_star(i, b)).collect::<Result<_, _>>()?;
            let string = engine.string_data(word.letters(), b)?;
            let ints = |v: Vec<String>| v.join(",");
            let _ = writeln!(table, "result\t{}", b.c);
            let _ = writeln!(table, "weight\t{}", ints(stats.wt.iter().map(i64::to_string).collect()));
            let _ = writeln!(
                table,
                "eps\t{}",
                ints(stats.eps.iter().map(|e| e.map_or("-inf".into(), |v| v.to_string())).collect())
            );
            let _ = writeln!(table, "eps*\t{}", ints(eps_star.iter().map(i64::to_string).collect()));
            let _ = writeln!(table, "string\t{}", ints(string.iter().map(i64::to_string).collect()));
            json["result"] = json!(b.c);
            json["in_word"] = json!(engine.restrict(b));
            json["weight"] = json!(stats.wt);
            json["eps"] = json!(stats.eps);
            json["phi"] = json!(phi);
            json["eps_star"] = json!(eps_star);
            json["string"] = json!(string);
        }
        None => {
            let _ = writeln!(table, "result\t0");
            json["result"] = Value::Null;
        }
    }
    Ok(Output::ok(json, table))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn operator_parsing() {
        let ops = parse_ops("f1, e*2^3 ,f2", 2).unwrap();
        assert_eq!(
            ops,
            vec![
                Op::F { star: false, i: 0, n: 1 },
                Op::E { star: true, i: 1, n: 3 },
                Op::F { star: false, i: 1, n: 1 }
            ]
        );
        assert!(parse_ops("g1", 2).is_err());
        assert!(parse_ops("f3", 2).is_err());
        assert!(parse_ops("f0", 2).is_err());
    }

    #[test]
    fn degrees_enumerate_compositions() {
        assert_eq!(degrees_of_height(2, 2).len(), 3);
        assert_eq!(degrees_of_height(3, 2).len(), 6);
        assert!(degrees_of_height(3, 4).iter().all(|d| d.height() == 4));
    }
}
