this_line_is_exactly_eighty_characters_long_so_it_should_not_be_flagged_here_a = 1
this_line_is_just_over_eighty_characters_long_so_it_should_be_flagged_here_ab = 12
short = 1
# http://a-very-long-url-that-goes-on-and-on-and-on.example.com/path/to/resource/x
xx = "a-string-that-is-quite-long-but-fits-in-a-line-with-room-to-spare-here"
