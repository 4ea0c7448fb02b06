//! The sensitivity hierarchy, from metric pointwise sensitivity to set-wise sensitivity orders.

mod fixed;
mod intermittent;
mod intrinsic;
mod metric;
mod quantified;
mod setwise;

pub use fixed::{fixed_sensitive_at, protosensitive, FixedVerdict, ProtoKind};
pub use intermittent::intermittent_order;
pub use intrinsic::{intrinsic_sensitivity, pseudocommutator, IntrinsicVerdict, PseudoKind};
pub use metric::{
    comanence_value, is_comanent, metric_pointwise_sensitive, resolution_field, Pointwise, ResolutionField,
};
pub use quantified::{quantified_field, quantified_sensitive_at, PairDistance, QuantifiedVerdict};
pub use setwise::{
    chaotic_order, s_ord, sensitivity_order, setwise_sensitivity, SOrd, SOrdReport, SetwiseReport, SetwiseWitness,
};
