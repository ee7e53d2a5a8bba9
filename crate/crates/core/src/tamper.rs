//! Targeted corruptions used to show that the checks have teeth.

/// A deliberate defect injected into an otherwise correct construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tamper {
    /// Multiplication of the induced monad post-composed with a
    /// non-identity automorphism.
    BrokenMu,
    /// The augmentation cell θ twisted by the fiber-reversing involution.
    InvertedTheta,
    /// Descent data enumerated without the cocycle equation.
    DroppedCocycle,
    /// Faces d0 and d1 exchanged while the constraint cells keep the
    /// standard convention.
    SwappedFaces,
    /// Descent morphisms not required to commute with ρ.
    UnconstrainedDescentMaps,
    /// Counit of `Σ_p ⊣ p*` post-composed with a non-identity automorphism.
    BrokenTriangle,
}

impl Tamper {
    pub const ALL: [Tamper; 6] = [
        Tamper::BrokenMu,
        Tamper::InvertedTheta,
        Tamper::DroppedCocycle,
        Tamper::SwappedFaces,
        Tamper::UnconstrainedDescentMaps,
        Tamper::BrokenTriangle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Tamper::BrokenMu => "broken-mu",
            Tamper::InvertedTheta => "inverted-theta",
            Tamper::DroppedCocycle => "dropped-cocycle",
            Tamper::SwappedFaces => "swapped-faces",
            Tamper::UnconstrainedDescentMaps => "unconstrained-descent-maps",
            Tamper::BrokenTriangle => "broken-triangle",
        }
    }

    pub fn parse(s: &str) -> Option<Tamper> {
        Tamper::ALL.into_iter().find(|t| t.name() == s)
    }
}

impl std::fmt::Display for Tamper {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}
