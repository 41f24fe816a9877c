try:
    risky ()
except ValueError as exc:
    print('bad value:',exc)
except (KeyError,IndexError):
    pass
else :
    commit()
finally:
    cleanup() ;
