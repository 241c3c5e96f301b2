# Networks
#
# Frozen perceptual net, convolutional autoencoder and the SE attention
# classifier with its training loop.

from .perceptual import PerceptualNet
from .autoencoder import (
    Autoencoder,
    AETrainingResult,
    ae_total_loss,
    load_autoencoder,
    mse_loss,
    perceptual_loss,
    train_autoencoder,
)
from .attention import AttentionClassifier, SEBlock, classify, fuse, se_block
from .classifier_trainer import ClassifierRun, load_classifier, stratified_split, train_classifier

__all__ = [
    'PerceptualNet',
    'Autoencoder',
    'AETrainingResult',
    'ae_total_loss',
    'load_autoencoder',
    'mse_loss',
    'perceptual_loss',
    'train_autoencoder',
    'AttentionClassifier',
    'SEBlock',
    'classify',
    'fuse',
    'se_block',
    'ClassifierRun',
    'load_classifier',
    'stratified_split',
    'train_classifier',
]
