use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::factor::extension_field;
use super::field::{FieldElement, FieldSpec};
use super::triform::TriForm;
use crate::error::Error;
use crate::Result;

/// Parse a homogeneous form in x, y, z. Whitespace is insignificant between
/// tokens. Terms are `coeff`, `coeff*monomials`, or bare `monomials`; a
/// coefficient is a decimal integer, or a fraction over the rationals.
/// Mixed-degree input is rejected; full cancellation yields the zero form.
/// The exponent of each variable, after multiplying repeats, is capped at
/// 4096.
pub fn parse_form(field: &FieldSpec, input: &str) -> Result<TriForm> {
    let mut p = Parser {
        field,
        bytes: input.as_bytes(),
        pos: 0,
    };
    p.skip_ws();
    if p.at_end() {
        return Err(p.syntax("empty input"));
    }
    let mut negate = false;
    match p.peek() {
        Some(b'-') => {
            p.pos += 1;
            negate = true;
        }
        Some(b'+') => {
            p.pos += 1;
        }
        _ => {}
    }
    let mut terms: Vec<((u32, u32, u32), FieldElement)> = Vec::new();
    let mut degree: Option<u32> = None;
    loop {
        let (mut coeff, exps) = p.parse_term()?;
        if negate {
            coeff = field.neg(&coeff);
        }
        let d = exps.0 + exps.1 + exps.2;
        match degree {
            None => degree = Some(d),
            Some(d0) if d0 != d => {
                return Err(Error::Inhomogeneous(d0 as u64, d as u64));
            }
            _ => {}
        }
        terms.push((exps, coeff));
        p.skip_ws();
        match p.peek() {
            None => break,
            Some(b'+') => {
                p.pos += 1;
                negate = false;
            }
            Some(b'-') => {
                p.pos += 1;
                negate = true;
            }
            Some(_) => return Err(p.syntax("expected '+' or '-'")),
        }
    }
    Ok(TriForm::from_terms(
        field.clone(),
        degree.unwrap(),
        terms.into_iter().map(|(e, c)| (e, c)),
    ))
}

/// Parse a field description: `Q`, `F<p>`, or `F<p>^<k>`. The extension
/// degree is capped at 64; building the canonical modulus beyond that is
/// expensive and nothing downstream wants such a base field.
pub fn parse_field_spec(input: &str) -> Result<FieldSpec> {
    let s = input.trim();
    if s == "Q" {
        return Ok(FieldSpec::Rationals);
    }
    let Some(rest) = s.strip_prefix('F') else {
        return Err(Error::BadFieldSpec(input.to_string()));
    };
    let (p_str, k_str) = match rest.split_once('^') {
        Some((a, b)) => (a, Some(b)),
        None => (rest, None),
    };
    if p_str.is_empty() || !p_str.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::BadFieldSpec(input.to_string()));
    }
    let p: u64 = p_str
        .parse()
        .map_err(|_| Error::BadFieldSpec(format!("{input}: prime exceeds supported range")))?;
    let k: u32 = match k_str {
        None => 1,
        Some(ks) => {
            if ks.is_empty() || !ks.bytes().all(|b| b.is_ascii_digit()) {
                return Err(Error::BadFieldSpec(input.to_string()));
            }
            ks.parse()
                .map_err(|_| Error::BadFieldSpec(input.to_string()))?
        }
    };
    if k == 0 {
        return Err(Error::BadFieldSpec(input.to_string()));
    }
    if k > 64 {
        return Err(Error::BadFieldSpec(format!(
            "{input}: extension degree exceeds 64"
        )));
    }
    if k == 1 {
        return FieldSpec::prime(p);
    }
    if !super::field::is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    extension_field(p, k)
}

/// Parse a forms file: one `name = form` per line, blank lines skipped.
/// Names are identifiers and must be unique. Error positions are byte
/// offsets into the whole file.
pub fn parse_forms_file(field: &FieldSpec, text: &str) -> Result<Vec<(String, TriForm)>> {
    let mut out: Vec<(String, TriForm)> = Vec::new();
    let mut offset = 0usize;
    for line in text.split('\n') {
        let line_start = offset;
        offset += line.len() + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let Some(eq) = line.find('=') else {
            return Err(Error::Syntax {
                position: line_start,
                message: "expected 'name = form'".to_string(),
            });
        };
        let name = line[..eq].trim();
        if !is_identifier(name) {
            return Err(Error::Syntax {
                position: line_start,
                message: format!("bad name {name:?}"),
            });
        }
        if out.iter().any(|(n, _)| n == name) {
            return Err(Error::Syntax {
                position: line_start,
                message: format!("duplicate name {name:?}"),
            });
        }
        let body = &line[eq + 1..];
        let form = parse_form(field, body).map_err(|e| match e {
            Error::Syntax { position, message } => Error::Syntax {
                position: line_start + eq + 1 + position,
                message,
            },
            other => other,
        })?;
        out.push((name.to_string(), form));
    }
    Ok(out)
}

fn is_identifier(s: &str) -> bool {
    let mut bytes = s.bytes();
    match bytes.next() {
        Some(b) if b.is_ascii_alphabetic() || b == b'_' => {}
        _ => return false,
    }
    bytes.all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

struct Parser<'a> {
    field: &'a FieldSpec,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn syntax(&self, msg: &str) -> Error {
        Error::Syntax {
            position: self.pos,
            message: msg.to_string(),
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.bytes.len()
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self
            .bytes
            .get(self.pos)
            .is_some_and(|b| b.is_ascii_whitespace())
        {
            self.pos += 1;
        }
    }

    fn parse_uint_big(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.syntax("expected a number"));
        }
        let s = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        Ok(s.parse().unwrap())
    }

    fn parse_uint_small(&mut self) -> Result<u32> {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.syntax("expected a number"));
        }
        let s = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        let v: u32 = s.parse().map_err(|_| Error::Syntax {
            position: start,
            message: "exponent too large".to_string(),
        })?;
        if v > 4096 {
            return Err(Error::Syntax {
                position: start,
                message: "exponent too large".to_string(),
            });
        }
        Ok(v)
    }

    fn parse_term(&mut self) -> Result<(FieldElement, (u32, u32, u32))> {
        self.skip_ws();
        match self.peek() {
            Some(b) if b.is_ascii_digit() => {
                let num = self.parse_uint_big()?;
                self.skip_ws();
                let coeff = if self.peek() == Some(b'/') {
                    let slash_pos = self.pos;
                    self.pos += 1;
                    self.skip_ws();
                    let den = self.parse_uint_big()?;
                    if den == BigInt::from(0) {
                        return Err(Error::Syntax {
                            position: slash_pos,
                            message: "zero denominator".to_string(),
                        });
                    }
                    if *self.field != FieldSpec::Rationals {
                        return Err(Error::CoefficientNotInField(format!("{num}/{den}")));
                    }
                    self.field.from_rational(BigRational::new(num, den))?
                } else {
                    self.field
                        .from_rational(BigRational::new(num, BigInt::one()))?
                };
                self.skip_ws();
                if self.peek() == Some(b'*') {
                    self.pos += 1;
                    let exps = self.parse_monos()?;
                    Ok((coeff, exps))
                } else {
                    Ok((coeff, (0, 0, 0)))
                }
            }
            Some(b'x') | Some(b'y') | Some(b'z') => {
                let exps = self.parse_monos()?;
                Ok((self.field.one(), exps))
            }
            _ => Err(self.syntax("expected a coefficient or a variable")),
        }
    }

    fn parse_monos(&mut self) -> Result<(u32, u32, u32)> {
        let mut exps = (0u32, 0u32, 0u32);
        loop {
            self.skip_ws();
            let var = match self.peek() {
                Some(b'x') => 0,
                Some(b'y') => 1,
                Some(b'z') => 2,
                _ => return Err(self.syntax("expected a variable")),
            };
            let var_pos = self.pos;
            self.pos += 1;
            self.skip_ws();
            let e = if self.peek() == Some(b'^') {
                self.pos += 1;
                self.skip_ws();
                self.parse_uint_small()?
            } else {
                1
            };
            let slot = match var {
                0 => &mut exps.0,
                1 => &mut exps.1,
                _ => &mut exps.2,
            };
            *slot += e;
            if *slot > 4096 {
                return Err(Error::Syntax {
                    position: var_pos,
                    message: "exponent too large".to_string(),
                });
            }
            self.skip_ws();
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok(exps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn f13() -> FieldSpec {
        FieldSpec::prime(13).unwrap()
    }

    #[test]
    fn parse_fermat_quartic() {
        let f = f13();
        let form = parse_form(&f, "x^4 - y^4 - z^4").unwrap();
        let want =
            TriForm::from_i64_terms(&f, 4, &[(4, 0, 0, 1), (0, 4, 0, -1), (0, 0, 4, -1)]);
        assert_eq!(form, want);
    }

    #[test]
    fn whitespace_is_insignificant() {
        let f = f13();
        let a = parse_form(&f, "3*x*y + 2*z^2").unwrap();
        let b = parse_form(&f, "  3 * x * y+2*z ^ 2 ").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn repeated_variables_multiply() {
        let f = f13();
        let a = parse_form(&f, "x*x*y").unwrap();
        let b = parse_form(&f, "x^2*y").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn inhomogeneous_is_rejected() {
        let f = f13();
        match parse_form(&f, "x^2 + y") {
            Err(Error::Inhomogeneous(2, 1)) => {}
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn fractions_only_over_q() {
        let q = FieldSpec::Rationals;
        let form = parse_form(&q, "1/2*x^2 - y^2").unwrap();
        assert_eq!(
            form.coeff((2, 0, 0)),
            FieldElement::Rat(BigRational::new(1.into(), 2.into()))
        );
        match parse_form(&f13(), "1/2*x^2") {
            Err(Error::CoefficientNotInField(s)) => assert_eq!(s, "1/2"),
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn cancellation_gives_zero_form() {
        let f = f13();
        let form = parse_form(&f, "x - x").unwrap();
        assert!(form.is_zero());
        assert_eq!(form.degree(), 1);
    }

    #[test]
    fn exponents_are_capped_even_when_split_across_factors() {
        let f = f13();
        assert!(parse_form(&f, "x^4096").is_ok());
        assert!(matches!(
            parse_form(&f, "x^4097"),
            Err(Error::Syntax { .. })
        ));
        assert!(matches!(
            parse_form(&f, "x^4096*x"),
            Err(Error::Syntax { .. })
        ));
        assert!(matches!(
            parse_form(&f, "x^2048*y^4000*x^2049"),
            Err(Error::Syntax { .. })
        ));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let f = f13();
        match parse_form(&f, "x^2 & y^2") {
            Err(Error::Syntax { position, .. }) => assert_eq!(position, 4),
            other => panic!("unexpected: {other:?}"),
        }
        assert!(matches!(
            parse_form(&f, ""),
            Err(Error::Syntax { .. })
        ));
        assert!(matches!(
            parse_form(&f, "x + + y"),
            Err(Error::Syntax { .. })
        ));
        assert!(matches!(
            parse_form(&f, "2*"),
            Err(Error::Syntax { .. })
        ));
    }

    #[test]
    fn render_parse_round_trip() {
        let mut rng = ChaCha12Rng::seed_from_u64(1234);
        for field in [f13(), FieldSpec::Rationals] {
            for d in [1u32, 2, 3, 4] {
                for _ in 0..10 {
                    let mut terms = Vec::new();
                    for a in 0..=d {
                        for b in 0..=(d - a) {
                            let c = d - a - b;
                            let coeff = if field.is_finite() {
                                field.rand_elem(&mut rng)
                            } else {
                                use rand::Rng;
                                let n: i64 = rng.random_range(-20..=20);
                                let de: i64 = rng.random_range(1..=9);
                                FieldElement::Rat(BigRational::new(n.into(), de.into()))
                            };
                            terms.push(((a, b, c), coeff));
                        }
                    }
                    let form = TriForm::from_terms(field.clone(), d, terms);
                    if form.is_zero() {
                        continue;
                    }
                    let text = form.render();
                    let back = parse_form(&field, &text).unwrap();
                    assert_eq!(back, form, "round trip failed for {text}");
                }
            }
        }
    }

    #[test]
    fn field_specs() {
        assert_eq!(parse_field_spec("Q").unwrap(), FieldSpec::Rationals);
        assert_eq!(parse_field_spec("F13").unwrap(), f13());
        assert_eq!(parse_field_spec(" F13^1 ").unwrap(), f13());
        let e = parse_field_spec("F13^2").unwrap();
        assert_eq!(e.extension_degree(), 2);
        assert_eq!(e.characteristic(), 13);
        assert!(matches!(parse_field_spec("F15"), Err(Error::NotPrime(15))));
        for bad in ["", "G7", "F", "Fx", "F13^", "F13^0", "F13^65", "Q2"] {
            assert!(
                matches!(
                    parse_field_spec(bad),
                    Err(Error::BadFieldSpec(_)) | Err(Error::NotPrime(_))
                ),
                "should reject {bad:?}"
            );
        }
    }

    #[test]
    fn forms_files() {
        let f = f13();
        let text = "b = x^4 - y^4 - z^4\n\nc = x^2 - y^2 - z^2\n";
        let forms = parse_forms_file(&f, text).unwrap();
        assert_eq!(forms.len(), 2);
        assert_eq!(forms[0].0, "b");
        assert_eq!(forms[1].0, "c");
        assert!(matches!(
            parse_forms_file(&f, "a = x\na = y\n"),
            Err(Error::Syntax { .. })
        ));
        assert!(matches!(
            parse_forms_file(&f, "just a line\n"),
            Err(Error::Syntax { .. })
        ));
        // Error positions are file-absolute.
        match parse_forms_file(&f, "a = x\nb = x^2 & y\n") {
            Err(Error::Syntax { position, .. }) => {
                assert_eq!(position, 6 + 4 + 4);
            }
            other => panic!("unexpected: {other:?}"),
        }
    }
}
