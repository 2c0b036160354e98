use super::{IntPolynomial, RatPolynomial};

/// Primitive integer representative of the gcd over Q, or `None` when the
/// gcd is a nonzero constant (or every input is zero).
pub fn gcd_over_q(polys: &[IntPolynomial]) -> Option<IntPolynomial> {
    let mut g = RatPolynomial::zero();
    for p in polys {
        let mut a = g;
        let mut b = p.to_rational();
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        g = a.monic();
    }
    match g.degree() {
        None | Some(0) => None,
        _ => g.primitive_integer(),
    }
}

/// Primitive squarefree kernel `p / gcd(p, p')`, or `None` for constants.
pub fn squarefree_part(p: &IntPolynomial) -> Option<IntPolynomial> {
    if p.is_constant() {
        return None;
    }
    let rp = p.to_rational();
    let kernel = match gcd_over_q(&[p.clone(), p.derivative()]) {
        None => rp,
        Some(g) => rp.div_rem(&g.to_rational()).0,
    };
    kernel.primitive_integer()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> IntPolynomial {
        s.parse().unwrap()
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(gcd_over_q(&[p("2n^2-2"), p("3n+3")]), Some(p("n+1")));
        assert_eq!(gcd_over_q(&[p("2n"), p("3n"), p("n+1")]), None);
        assert_eq!(gcd_over_q(&[p("n^2"), p("2n^2+2n")]), Some(p("n")));
    }

    #[test]
    fn squarefree_examples() {
        assert_eq!(squarefree_part(&p("(n-1)^3(n+2)^2")), Some(p("(n-1)(n+2)")));
        assert_eq!(squarefree_part(&p("4n^2")), Some(p("n")));
        assert_eq!(squarefree_part(&p("7")), None);
    }
}
