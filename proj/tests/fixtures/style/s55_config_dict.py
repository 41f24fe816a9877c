CONFIG = {
    'learning_rate': 0.001,
    'batch_size':32,
    'layers': [64,64, 32],
    'dropout' :0.5,
    'optimizer': 'adam' ,
}
DEBUG=True
def get(key, default=None): return CONFIG.get(key, default)
