use std::fmt;

use super::{Result, RgtError};
use crate::algebra::Expr;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Combinator {
    Sum,
    Product,
    Leaf,
}

/// A node of the polynomial stratification tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratNode {
    pub polynomial: Expr,
    pub combinator: Combinator,
    pub children: Vec<StratNode>,
}

impl StratNode {
    /// Children recombined with the node's combinator. Leaves return their
    /// own variable.
    pub fn recombined(&self) -> Expr {
        let parts = self.children.iter().map(|c| c.polynomial.clone());
        match self.combinator {
            Combinator::Sum => Expr::join_all(parts).expect("sum node has children"),
            Combinator::Product => Expr::meet_all(parts).expect("product node has children"),
            Combinator::Leaf => self.polynomial.clone(),
        }
    }

    /// Depth-first walk, parent before children.
    pub fn walk(&self) -> Vec<&StratNode> {
        let mut out = vec![self];
        for c in &self.children {
            out.extend(c.walk());
        }
        out
    }

    fn write_tree(&self, f: &mut fmt::Formatter<'_>, depth: usize) -> fmt::Result {
        writeln!(f, "{:indent$}[{}]", "", self.polynomial, indent = depth * 2)?;
        for c in &self.children {
            c.write_tree(f, depth + 1)?;
        }
        Ok(())
    }
}

impl fmt::Display for StratNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_tree(f, 0)
    }
}

fn flatten_join<'a>(e: &'a Expr, out: &mut Vec<&'a Expr>) {
    match e {
        Expr::Join(a, b) => {
            flatten_join(a, out);
            flatten_join(b, out);
        }
        other => out.push(other),
    }
}

fn flatten_meet<'a>(e: &'a Expr, out: &mut Vec<&'a Expr>) {
    match e {
        Expr::Meet(a, b) => {
            flatten_meet(a, out);
            flatten_meet(b, out);
        }
        other => out.push(other),
    }
}

/// Splits a polynomial into maximal summands, each summand into maximal
/// factors, and so on down to single variables.
pub fn stratify(poly: &Expr) -> Result<StratNode> {
    match poly {
        Expr::Var(_) => Ok(StratNode {
            polynomial: poly.clone(),
            combinator: Combinator::Leaf,
            children: Vec::new(),
        }),
        Expr::Const(_) | Expr::Complement(_) => Err(RgtError::NotPolynomial(poly.to_string())),
        Expr::Join(..) => {
            let mut terms = Vec::new();
            flatten_join(poly, &mut terms);
            node(poly, Combinator::Sum, terms)
        }
        Expr::Meet(..) => {
            let mut factors = Vec::new();
            flatten_meet(poly, &mut factors);
            node(poly, Combinator::Product, factors)
        }
    }
}

fn node(poly: &Expr, combinator: Combinator, parts: Vec<&Expr>) -> Result<StratNode> {
    let children = parts.into_iter().map(stratify).collect::<Result<Vec<_>>>()?;
    Ok(StratNode {
        polynomial: poly.clone(),
        combinator,
        children,
    })
}

/// Folds the diagonal form bottom-up: each node becomes its polynomial
/// raised to the combined folds of its children, with `P^W = P + ~W`.
pub fn fold_diagonal(t: &StratNode) -> Expr {
    match t.combinator {
        Combinator::Leaf => t.polynomial.clone(),
        Combinator::Sum | Combinator::Product => {
            let folded = t.children.iter().map(fold_diagonal);
            let exponent = if t.combinator == Combinator::Sum {
                Expr::join_all(folded)
            } else {
                Expr::meet_all(folded)
            }
            .expect("inner node has children");
            Expr::exp(t.polynomial.clone(), exponent)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{equivalent, UniversalSet};

    fn u() -> UniversalSet {
        UniversalSet::new(["alpha", "beta"]).unwrap()
    }

    fn vars(e: &Expr) -> Vec<String> {
        e.variables().into_iter().collect()
    }

    fn shape(n: &StratNode) -> String {
        match n.combinator {
            Combinator::Leaf => n.polynomial.to_string(),
            Combinator::Sum => format!(
                "Sum{{{}}}",
                n.children.iter().map(shape).collect::<Vec<_>>().join(",")
            ),
            Combinator::Product => format!(
                "Product{{{}}}",
                n.children.iter().map(shape).collect::<Vec<_>>().join(",")
            ),
        }
    }

    #[test]
    fn stratify_examples() {
        let u = u();
        let t = stratify(&Expr::parse("ab + c", &u).unwrap()).unwrap();
        assert_eq!(shape(&t), "Sum{Product{a,b},c}");
        assert_eq!(t.children[0].polynomial.to_string(), "ab");

        let t = stratify(&Expr::var("a")).unwrap();
        assert_eq!(t.combinator, Combinator::Leaf);
        assert!(t.children.is_empty());

        let t = stratify(&Expr::parse("abc + d", &u).unwrap()).unwrap();
        assert_eq!(shape(&t), "Sum{Product{a,b,c},d}");
    }

    #[test]
    fn association_does_not_change_the_tree_shape() {
        let u = u();
        let left = stratify(&Expr::parse("(ab)c + d", &u).unwrap()).unwrap();
        let right = stratify(&Expr::parse("a(bc) + d", &u).unwrap()).unwrap();
        assert_eq!(shape(&left), shape(&right));
    }

    #[test]
    fn non_polynomials_are_rejected() {
        let u = u();
        for text in ["a + ~b", "a{alpha}", "1", "~(ab)"] {
            let e = Expr::parse(text, &u).unwrap();
            assert!(matches!(stratify(&e), Err(RgtError::NotPolynomial(_))), "{text}");
        }
    }

    #[test]
    fn levels_alternate_and_children_recombine() {
        let u = u();
        for text in ["ab + c", "abc + d", "a(b + cd) + e", "(a + b)(c + d)", "a + b + c"] {
            let p = Expr::parse(text, &u).unwrap();
            let t = stratify(&p).unwrap();
            for n in t.walk() {
                if n.combinator == Combinator::Leaf {
                    assert!(matches!(n.polynomial, Expr::Var(_)));
                    continue;
                }
                assert!(n.children.len() >= 2);
                for c in &n.children {
                    assert_ne!(c.combinator, n.combinator, "{text}");
                }
                assert!(equivalent(&n.recombined(), &n.polynomial, &vars(&n.polynomial), &u).unwrap());
            }
        }
    }

    #[test]
    fn fold_reproduces_sums_with_a_compound_term() {
        let u = u();
        for text in ["ab + c", "abc + d", "a + bc", "a(b + cd) + e"] {
            let p = Expr::parse(text, &u).unwrap();
            let folded = fold_diagonal(&stratify(&p).unwrap());
            assert!(equivalent(&folded, &p, &vars(&p), &u).unwrap(), "{text}");
        }
        assert_eq!(fold_diagonal(&stratify(&Expr::var("a")).unwrap()), Expr::var("a"));
    }

    // A node whose children are all leaves folds to P + ~P = 1; a product
    // over a folded sum keeps only the complement of its leaf factors; a
    // node whose children all fold to 1 is left as it is.
    #[test]
    fn fold_of_other_shapes() {
        let u = u();
        for (text, expected) in [
            ("ab", "1"),
            ("abc", "1"),
            ("a + b + c", "1"),
            ("a(b + c)", "a(b + c) + ~a"),
            ("(a + b)(c + d)", "(a + b)(c + d)"),
        ] {
            let p = Expr::parse(text, &u).unwrap();
            let folded = fold_diagonal(&stratify(&p).unwrap());
            let e = Expr::parse(expected, &u).unwrap();
            assert!(equivalent(&folded, &e, &vars(&p), &u).unwrap(), "{text}");
        }
    }

    #[test]
    fn fold_uses_the_exponential_form() {
        let u = u();
        let p = Expr::parse("ab + c", &u).unwrap();
        let folded = fold_diagonal(&stratify(&p).unwrap());
        assert_eq!(folded.to_string(), "ab + c + ~(ab + ~(ab) + c)");
    }
}
