use arbatation::arbator::{arbate_metered, CalcResult, Meter};
use arbatation::machine::{Budget, ExceededKind};
use arbatation::numerals::{Nat, Numeral, TrigNumeral};
use arbatation::snark::{enumerate_unary_schemes, snark};
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ALPHABET: &str = "01234567{}abcdefghijN=#!|&>~(;)EA[]";
const REDUCED: &str = "01234567{}bN(;)";
const DIAGONAL_BUDGET: Budget = Budget { max_steps: Some(1_000_000), max_value_bits: 1 << 20 };

fn to_base35(n: &Nat) -> String {
    if n.is_zero() {
        return "0".into();
    }
    let alphabet: Vec<char> = ALPHABET.chars().collect();
    let mut n = n.clone();
    let mut out = Vec::new();
    while !n.is_zero() {
        let d = (&n % 35u32).to_usize().unwrap();
        out.push(alphabet[d]);
        n /= 35u32;
    }
    out.iter().rev().collect()
}

fn from_base35(s: &str) -> Nat {
    s.chars().fold(Nat::zero(), |acc, c| acc * 35u32 + ALPHABET.find(c).unwrap() as u32)
}

#[derive(Debug)]
enum Tree {
    Number(String),
    Variable(usize),
    Apply(Vec<Tree>, Box<Tree>),
}

struct Reader<'a> {
    s: &'a [u8],
    i: usize,
}

impl Reader<'_> {
    fn tree(&mut self) -> Option<Tree> {
        match *self.s.get(self.i)? {
            b'(' => {
                self.i += 1;
                let mut args = Vec::new();
                if self.s.get(self.i) == Some(&b')') {
                    self.i += 1;
                } else {
                    loop {
                        args.push(self.tree()?);
                        let c = *self.s.get(self.i)?;
                        self.i += 1;
                        match c {
                            b';' => continue,
                            b')' => break,
                            _ => return None,
                        }
                    }
                }
                let program = self.tree()?;
                Some(Tree::Apply(args, Box::new(program)))
            }
            b'N' => {
                self.i += 1;
                let start = self.i;
                while self.s.get(self.i) == Some(&b'b') {
                    self.i += 1;
                }
                (self.i > start).then_some(Tree::Variable(self.i - start))
            }
            c if c.is_ascii_digit() || c == b'{' || c == b'}' => {
                let start = self.i;
                while self.s.get(self.i).is_some_and(|&c| c.is_ascii_digit() || c == b'{' || c == b'}') {
                    self.i += 1;
                }
                let digits: String = self.s[start..self.i]
                    .iter()
                    .map(|&c| match c {
                        b'{' => '8',
                        b'}' => '9',
                        c => c as char,
                    })
                    .collect();
                (digits == "0" || !digits.starts_with('0')).then_some(Tree::Number(digits))
            }
            _ => None,
        }
    }
}

fn read(s: &str) -> Option<Tree> {
    let mut r = Reader { s: s.as_bytes(), i: 0 };
    let t = r.tree()?;
    (r.i == s.len()).then_some(t)
}

fn max_variable(t: &Tree) -> usize {
    match t {
        Tree::Number(_) => 0,
        Tree::Variable(k) => *k,
        Tree::Apply(args, p) => args.iter().map(max_variable).chain([max_variable(p)]).max().unwrap(),
    }
}

fn is_scheme(s: &str) -> bool {
    read(s).is_some_and(|t| max_variable(&t) == 1)
}

fn value(t: &Tree, meter: &mut Meter) -> Result<Nat, ExceededKind> {
    match t {
        Tree::Number(d) => Ok(Numeral::parse(d).unwrap().to_nat()),
        Tree::Variable(_) => unreachable!("terms have no variables"),
        Tree::Apply(args, p) => {
            let program = Numeral::from_nat(&value(p, meter)?);
            let mut xs = Vec::with_capacity(args.len());
            for a in args {
                xs.push(value(a, meter)?);
            }
            match arbate_metered(&program, &xs, meter) {
                CalcResult::Value(v) => Ok(v),
                CalcResult::BudgetExceeded(k) => Err(k),
            }
        }
    }
}

/// Index to string, insertion of the index, evaluation, successor, back to an index.
fn reference(n: &Nat, budget: Budget) -> Result<Nat, ExceededKind> {
    let s = to_base35(n);
    let term = if is_scheme(&s) {
        let digits = n.to_string().replace('8', "{").replace('9', "}");
        s.replace("Nb", &digits)
    } else {
        "0".to_string()
    };
    let v = match read(&term) {
        Some(t) if max_variable(&t) == 0 => value(&t, &mut Meter::new(budget))?,
        _ => Nat::zero(),
    };
    Ok(from_base35(&to_base35(&v)) + 1u32)
}

fn random_scheme(rng: &mut ChaCha8Rng, depth: u32, out: &mut String) {
    if depth == 0 || rng.gen_bool(0.35) {
        if rng.gen_bool(0.5) {
            out.push_str("Nb");
        } else {
            let digits = REDUCED.as_bytes()[1..10].to_vec();
            out.push(digits[rng.gen_range(0..digits.len())] as char);
            for _ in 0..rng.gen_range(0..4) {
                out.push(REDUCED.as_bytes()[rng.gen_range(0..10)] as char);
            }
        }
        return;
    }
    out.push('(');
    for i in 0..rng.gen_range(1..=2) {
        if i > 0 {
            out.push(';');
        }
        random_scheme(rng, depth - 1, out);
    }
    out.push(')');
    random_scheme(rng, depth - 1, out);
}

#[test]
fn base35_helpers_agree_with_the_library() {
    for v in 0..5000u64 {
        let n = Nat::from(v);
        assert_eq!(to_base35(&n), TrigNumeral::from_nat(&n).as_str());
        assert_eq!(from_base35(&to_base35(&n)), n);
    }
}

#[test]
fn snark_matches_reference_below_2000() {
    for v in 0..2000u64 {
        let n = Nat::from(v);
        assert_eq!(snark(&n, DIAGONAL_BUDGET), reference(&n, DIAGONAL_BUDGET), "{v}");
    }
    assert_eq!(snark(&Nat::from(0u32), DIAGONAL_BUDGET), Ok(Nat::from(1u32)));
    assert_eq!(snark(&Nat::from(711u32), DIAGONAL_BUDGET), Ok(Nat::from(712u32)));
}

#[test]
fn enumeration_flags_match_reference() {
    for r in enumerate_unary_schemes(50_000) {
        assert_eq!(r.is_unary_scheme, is_scheme(r.trig.as_str()), "{}", r.trig);
    }
    let first = enumerate_unary_schemes(2000).find(|r| r.is_unary_scheme).unwrap();
    assert_eq!(first.index, Nat::from(711u32));
}

#[test]
fn snark_matches_reference_on_random_schemes() {
    let mut rng = ChaCha8Rng::seed_from_u64(35);
    let mut schemes = 0;
    for _ in 0..400 {
        let mut s = String::new();
        random_scheme(&mut rng, 3, &mut s);
        let n = from_base35(&s);
        let want = reference(&n, DIAGONAL_BUDGET);
        assert_eq!(snark(&n, DIAGONAL_BUDGET), want, "{s}");
        schemes += usize::from(is_scheme(&s));
    }
    assert!(schemes > 50, "{schemes}");
}

#[test]
fn diagonal_inequality() {
    let mut rng = ChaCha8Rng::seed_from_u64(36);
    let mut indices: Vec<Nat> = enumerate_unary_schemes(2000).filter(|r| r.is_unary_scheme).map(|r| r.index).collect();
    for _ in 0..200 {
        let mut s = String::new();
        random_scheme(&mut rng, 3, &mut s);
        if is_scheme(&s) {
            indices.push(from_base35(&s));
        }
    }
    for n in &indices {
        let s = to_base35(n);
        let digits = n.to_string().replace('8', "{").replace('9', "}");
        let own = read(&s.replace("Nb", &digits)).unwrap();
        if let (Ok(v), Ok(d)) = (value(&own, &mut Meter::new(DIAGONAL_BUDGET)), snark(n, DIAGONAL_BUDGET)) {
            assert_ne!(d, v, "{s}");
        }
    }
}
