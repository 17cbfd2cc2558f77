//! From-scratch trainers: the two-layer ReLU network with norm-coupled bias
//! and antisymmetric initialization, plus a generic ReLU MLP. Full-batch
//! gradient descent only; everything is deterministic given a seed.

mod checkpoint;
mod mlp;
mod two_layer;

pub use checkpoint::{read_checkpoint, write_checkpoint, CheckpointHeader};
pub use mlp::{build_mlp, train_mlp, Mlp, MlpTrainConfig, MlpTrainRecord};
pub use two_layer::{
    init_two_layer, stable_learning_rate, train, InitConfig, TrainCheckpoint, TrainConfig,
    TrainRecord, TwoLayerNet,
};
