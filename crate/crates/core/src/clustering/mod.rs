//! Label extraction and clustering quality metrics.

mod hungarian;
mod kmeans;
mod metrics;

pub use hungarian::max_weight_assignment;
pub use kmeans::{kmeans, wcss, KMeansResult};
pub use metrics::{
    accuracy, assign_labels, confusion_matrix, evaluate, nmi, Accuracy, ClusteringReport,
    LabelVector,
};
