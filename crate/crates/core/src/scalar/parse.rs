use super::{RatFunc, ScalarError};
use crate::expr;

/// Parse a scalar such as `3/2*q^(1/2) - q^(-1)` or `(q^2 - 1)/(q - 1)`.
pub fn parse_scalar(s: &str) -> Result<RatFunc, ScalarError> {
    let e = expr::parse(s).map_err(|e| ScalarError::Parse(e.to_string()))?;
    match e.as_scalar() {
        Ok(Some(v)) => Ok(v),
        Ok(None) => Err(ScalarError::Parse(format!("`{s}` is not a scalar"))),
        Err(expr::ExprError::Scalar(e)) => Err(e),
        Err(e) => Err(ScalarError::Parse(e.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{QExp, QField};
    use num_traits::One;

    #[test]
    fn display_round_trip() {
        for s in ["3/2*q^(1/2) - q^(-1)", "(-q)/(q^2 - 1)", "0", "q^(-1/3) + 7"] {
            let x = parse_scalar(s).unwrap();
            assert_eq!(parse_scalar(&x.to_string()).unwrap(), x, "{s}");
        }
    }

    #[test]
    fn quotient_reduces() {
        let x = parse_scalar("(q^2 - 1)/(q - 1)").unwrap();
        assert_eq!(x, RatFunc::q_pow(QExp::int(1)) + RatFunc::one());
    }

    #[test]
    fn bad_exponent_is_rejected() {
        assert!(parse_scalar("q^(1/5)").is_err());
        assert!(parse_scalar("e1").is_err());
    }
}
