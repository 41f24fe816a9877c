class Config:
    retries = 3
    timeout = retries * 2
print(Config.timeout)
