//! k-community expressions.
//!
//! ```text
//! expr  := LAYER (OP LAYER)*
//! OP    := ('*' | 'Θ') '[' LAYER ',' LAYER ']'
//! LAYER := [A-Za-z0-9_.-]+
//! ```
//!
//! Whitespace is insignificant. Compositions apply strictly left to right.
//! For each operator `*[l,r]`, `r` must be the layer that follows it and `l`
//! must be a layer that appears earlier in the expression. A layer may occur
//! at most twice (the second occurrence closes a cycle).

use std::fmt;

use crate::mln::MultilayerNetwork;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExprError {
    #[error("syntax error at byte {position}: expected {expected}")]
    Syntax { position: usize, expected: String },
    #[error("{0} is not supported")]
    NotSupported(String),
    #[error("unknown layer {0:?} in expression")]
    UnknownLayer(String),
    #[error("no inter-layer edges declared between {0} and {1}")]
    DisconnectedStep(String, String),
    #[error("operator {position} subscripts [{left},{right}] do not match the expression: {reason}")]
    SubscriptMismatch {
        position: usize,
        left: String,
        right: String,
        reason: String,
    },
    #[error("layer {0:?} occurs more than twice")]
    RepeatedLayer(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositionStep {
    pub left_layer: String,
    pub right_layer: String,
    /// 1-based.
    pub position: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepCase {
    /// The first composition, between two fresh layers.
    Initial,
    /// One processed layer and one new layer: tuples are extended.
    NewLayer,
    /// Both layers already processed: tuples are updated in place.
    BothProcessed,
}

impl StepCase {
    pub fn label(self) -> &'static str {
        match self {
            StepCase::Initial => "initial",
            StepCase::NewLayer => "case_i",
            StepCase::BothProcessed => "case_ii",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KCommunityExpression {
    pub layer_sequence: Vec<String>,
    pub steps: Vec<CompositionStep>,
    /// Number of distinct layers.
    pub k: usize,
    pub cyclic: bool,
}

impl KCommunityExpression {
    /// Distinct layers in order of first appearance; this is the slot order
    /// of community ids in result tuples.
    pub fn distinct_layers(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for l in &self.layer_sequence {
            if !out.contains(&l.as_str()) {
                out.push(l);
            }
        }
        out
    }

    pub fn slot_of(&self, layer: &str) -> Option<usize> {
        self.distinct_layers().iter().position(|&l| l == layer)
    }
}

impl fmt::Display for KCommunityExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(first) = self.layer_sequence.first() {
            f.write_str(first)?;
        }
        for (step, next) in self.steps.iter().zip(self.layer_sequence.iter().skip(1)) {
            write!(f, " *[{},{}] {}", step.left_layer, step.right_layer, next)?;
        }
        Ok(())
    }
}

struct Lexer<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.text[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.text[self.pos..].chars().next()
    }

    fn err(&self, expected: &str) -> ExprError {
        ExprError::Syntax {
            position: self.pos,
            expected: expected.to_owned(),
        }
    }

    fn expect(&mut self, c: char, what: &str) -> Result<(), ExprError> {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(self.err(what))
        }
    }

    fn layer(&mut self) -> Result<String, ExprError> {
        match self.peek() {
            Some('(') | Some(')') => {
                return Err(ExprError::NotSupported(
                    "parenthesised (explicit precedence) composition".into(),
                ))
            }
            _ => {}
        }
        let start = self.pos;
        while let Some(c) = self.text[self.pos..].chars().next() {
            if c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.') {
                self.pos += 1;
            } else {
                break;
            }
        }
        if self.pos == start {
            Err(self.err("layer name"))
        } else {
            Ok(self.text[start..self.pos].to_owned())
        }
    }
}

/// Parses the expression text without consulting any network.
pub fn parse_syntax(text: &str) -> Result<KCommunityExpression, ExprError> {
    let mut lx = Lexer { text, pos: 0 };
    let mut layers = vec![lx.layer()?];
    let mut ops: Vec<(String, String)> = Vec::new();
    loop {
        match lx.peek() {
            None => break,
            Some('*') | Some('Θ') => {
                let c = lx.peek().unwrap();
                lx.pos += c.len_utf8();
            }
            Some('(') | Some(')') => {
                return Err(ExprError::NotSupported(
                    "parenthesised (explicit precedence) composition".into(),
                ))
            }
            Some(_) => return Err(lx.err("operator `*[` or end of input")),
        }
        lx.expect('[', "`[`")?;
        let l = lx.layer()?;
        lx.expect(',', "`,`")?;
        let r = lx.layer()?;
        lx.expect(']', "`]`")?;
        ops.push((l, r));
        layers.push(lx.layer()?);
    }
    if ops.is_empty() {
        return Err(lx.err("at least one composition operator"));
    }

    for name in &layers {
        if layers.iter().filter(|l| *l == name).count() > 2 {
            return Err(ExprError::RepeatedLayer(name.clone()));
        }
    }

    let mut steps = Vec::with_capacity(ops.len());
    for (i, (l, r)) in ops.into_iter().enumerate() {
        let mismatch = |reason: &str| ExprError::SubscriptMismatch {
            position: i + 1,
            left: l.clone(),
            right: r.clone(),
            reason: reason.to_owned(),
        };
        if r != layers[i + 1] {
            return Err(mismatch(&format!(
                "right subscript must be the following layer {}",
                layers[i + 1]
            )));
        }
        if l == r {
            return Err(mismatch("a layer cannot be composed with itself"));
        }
        if !layers[..=i].contains(&l) {
            return Err(mismatch("left subscript must name a layer that appears earlier"));
        }
        steps.push(CompositionStep {
            left_layer: l,
            right_layer: r,
            position: i + 1,
        });
    }

    let mut distinct = layers.clone();
    distinct.sort();
    distinct.dedup();
    let k = distinct.len();
    let cyclic = k < layers.len();
    Ok(KCommunityExpression {
        layer_sequence: layers,
        steps,
        k,
        cyclic,
    })
}

/// Parses and checks every layer and step against the network.
pub fn parse_expression(text: &str, mln: &MultilayerNetwork) -> Result<KCommunityExpression, ExprError> {
    let expr = parse_syntax(text)?;
    for l in &expr.layer_sequence {
        if mln.layer(l).is_none() {
            return Err(ExprError::UnknownLayer(l.clone()));
        }
    }
    for s in &expr.steps {
        if !mln.has_interlayer(&s.left_layer, &s.right_layer) {
            return Err(ExprError::DisconnectedStep(
                s.left_layer.clone(),
                s.right_layer.clone(),
            ));
        }
    }
    Ok(expr)
}

/// Labels each step: the first is `Initial`; later steps are `BothProcessed`
/// when their right layer is already part of the partial result.
pub fn classify_steps(expr: &KCommunityExpression) -> Vec<StepCase> {
    let mut seen: Vec<&str> = Vec::new();
    expr.steps
        .iter()
        .enumerate()
        .map(|(i, s)| {
            if i == 0 {
                seen.push(&s.left_layer);
                seen.push(&s.right_layer);
                StepCase::Initial
            } else if seen.contains(&s.right_layer.as_str()) {
                StepCase::BothProcessed
            } else {
                seen.push(&s.right_layer);
                StepCase::NewLayer
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mln::{InterLayerEdges, LayerGraph};

    fn mln(layers: &[&str], pairs: &[(&str, &str)]) -> MultilayerNetwork {
        let mut m = MultilayerNetwork::new();
        for l in layers {
            let node = format!("{l}_n");
            m.add_layer(LayerGraph::from_edges(*l, vec![node], Vec::<(String, String)>::new()).0);
        }
        for (a, b) in pairs {
            m.add_interlayer(InterLayerEdges::new(*a, *b, Vec::<(String, String)>::new()).0);
        }
        m
    }

    #[test]
    fn two_layer() {
        let e = parse_syntax("A *[A,D] D").unwrap();
        assert_eq!(e.layer_sequence, vec!["A", "D"]);
        assert_eq!(e.steps.len(), 1);
        assert_eq!(e.k, 2);
        assert!(!e.cyclic);
        assert_eq!(classify_steps(&e), vec![StepCase::Initial]);
    }

    #[test]
    fn cyclic_three() {
        let e = parse_syntax("M *[M,A] A *[A,D] D *[D,M] M").unwrap();
        assert_eq!(e.steps.len(), 3);
        assert_eq!(e.k, 3);
        assert!(e.cyclic);
        assert_eq!(
            classify_steps(&e),
            vec![StepCase::Initial, StepCase::NewLayer, StepCase::BothProcessed]
        );
        assert_eq!(e.distinct_layers(), vec!["M", "A", "D"]);
    }

    #[test]
    fn acyclic_three_with_unicode_and_spacing() {
        let e = parse_syntax("P Θ[P,Au]Au  *[ Au , Y ]   Y").unwrap();
        assert_eq!(e.k, 3);
        assert!(!e.cyclic);
        assert_eq!(classify_steps(&e), vec![StepCase::Initial, StepCase::NewLayer]);
        assert_eq!(e.to_string(), "P *[P,Au] Au *[Au,Y] Y");
    }

    #[test]
    fn non_adjacent_left_subscript() {
        let e = parse_syntax("G2 *[G2,G1] G1 *[G2,G3] G3").unwrap();
        assert_eq!(e.steps[1].left_layer, "G2");
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_syntax("A *[A,B]"), Err(ExprError::Syntax { .. })));
        assert!(matches!(parse_syntax("A"), Err(ExprError::Syntax { .. })));
        assert!(matches!(parse_syntax("A + B"), Err(ExprError::Syntax { .. })));
        assert!(matches!(parse_syntax("A *[A,C] B"), Err(ExprError::SubscriptMismatch { .. })));
        assert!(matches!(parse_syntax("A *[X,B] B"), Err(ExprError::SubscriptMismatch { .. })));
        assert!(matches!(
            parse_syntax("(A *[A,B] B) *[B,C] C"),
            Err(ExprError::NotSupported(_))
        ));
        assert!(matches!(
            parse_syntax("A *[A,B] B *[B,A] A *[A,B] B *[B,A] A"),
            Err(ExprError::RepeatedLayer(_))
        ));
    }

    #[test]
    fn network_checks() {
        let m = mln(&["A", "B", "C"], &[("A", "B")]);
        assert!(parse_expression("A *[A,B] B", &m).is_ok());
        assert_eq!(
            parse_expression("A *[A,Q] Q", &m),
            Err(ExprError::UnknownLayer("Q".into()))
        );
        assert_eq!(
            parse_expression("A *[A,B] B *[B,C] C", &m),
            Err(ExprError::DisconnectedStep("B".into(), "C".into()))
        );
        assert!(parse_expression("B *[B,A] A", &m).is_ok());
    }
}
