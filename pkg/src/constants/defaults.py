"""Default hyper-parameters."""

# Seeds
DEFAULT_SEED = 0
SEED_ENV_VAR = "GZGD_SEED"

# Visual masks
MASK_ALPHA = 0.75
MASK_BETA = 0.25
MASK_KAPPA = 255
MASK_SIGMA_AT_64 = 2.0          # scaled as H / 32
MASK_KERNEL_SIGMAS = 3.0        # radius = ceil(3 * sigma)
MASK_MODE_PER_FRAME = "per_frame"
MASK_MODE_COMBINED = "combined"
MASK_MODES = (MASK_MODE_PER_FRAME, MASK_MODE_COMBINED)

# Autoencoder
AE_LATENT_DIM = 64
AE_CHANNELS = (1, 8, 16, 32)
AE_EPOCHS = 30
AE_BATCH = 32
AE_LR = 0.001
AE_DROPOUT = 0.5
AE_PERCEPTUAL_LAYER = 2
AE_FRAME_STRIDE = 2
AE_UPSAMPLE_MODES = ("nearest", "transpose")
PERCEPTUAL_CHANNELS = (1, 8, 16, 16)
PERCEPTUAL_SEED_OFFSET = 7919

# Attention classifier
CLS_SE_REDUCTION = 4
CLS_KERNEL_SIZE = 3
CLS_EPOCHS = 50
CLS_LR = 0.002
CLS_BATCH = 1                   # one clip per step
CLS_TEST_FRACTION = 0.2
MASK_SOURCES = ("mask", "masked_frames")

# Adam
ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPS = 1e-8

# Trust
TRUST_ALPHA = 1.0
TRUST_BETA = 1.0
TRUST_GRID_SIZE = 256
TRUST_HIGH_NTS = 0.8

# Synthetic data
SYNTH_CLIPS = 120
SYNTH_FRAMES = 24
SYNTH_SIZE = 64
SYNTH_RATIO = 0.5
SYNTH_CLINICAL_RATIO = 325 / (325 + 129)
SYNTH_GAZE_JITTER = 2.0
SYNTH_MISSING_RATE = 0.1
SYNTH_DISTRACTORS = 2
SYNTH_NOISE = 8.0
SYNTH_PATCH = 16
SYNTH_STRIPE_PERIOD = 8
